# src/pntap/analysis/report.py
from __future__ import annotations
from typing import Any, Dict

import pandas as pd

# Optional dependency for DataFrame.to_markdown()
try:
    import tabulate  # noqa: F401
    _HAS_TABULATE = True
except Exception:
    _HAS_TABULATE = False


def df_to_md(df: pd.DataFrame) -> str:
    """Markdown table if 'tabulate' is installed, otherwise plain text fallback."""
    try:
        if _HAS_TABULATE:
            return df.to_markdown(index=False)
    except Exception:
        pass
    return "```\n" + df.to_string(index=False) + "\n```"


def check_table(result: Dict[str, Any]) -> pd.DataFrame:
    rows = []
    for c in result.get("checks", []):
        rows.append({
            "check": c["name"],
            "status": "PASS" if c["passed"] else "FAIL",
            "summary": c.get("summary", ""),
        })
    return pd.DataFrame(rows, columns=["check", "status", "summary"])


def render_verify(result: Dict[str, Any]) -> str:
    head = f"# pntap verify ({result.get('mode', '?')}, seed {result.get('seed')})\n\n"
    verdict = "all checks passed" if result.get("passed") else "FAILURES present"
    return head + df_to_md(check_table(result)) + f"\n\n{verdict}\n"


def make_markdown_report(result: Dict[str, Any], out_path: str) -> str:
    with open(out_path, "w", encoding="utf-8") as f:
        f.write(render_verify(result))
    return out_path
