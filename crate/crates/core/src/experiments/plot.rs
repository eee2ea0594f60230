use std::path::Path;

use super::CSV_COLUMNS;
use crate::error::{Error, Result};

const TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Plot iteration counts and condition numbers against the refinement level.

Generated by mfd-twolevel; reads CSV_PATH below.
"""
import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = @CSV@
COLUMNS = @COLUMNS@
SERIES_KEYS = ["family", "L", "mode", "smoother", "nu", "coarse", "system"]


def number(text):
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load(path):
    with open(path, newline="") as handle:
        rows = list(csv.DictReader(handle))
    series = {}
    for row in rows:
        key = " ".join(f"{k}={row.get(k, '')}" for k in SERIES_KEYS)
        series.setdefault(key, []).append(row)
    return series


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else CSV_PATH.rsplit(".", 1)[0] + ".png"
    series = load(CSV_PATH)
    fig, (ax_it, ax_cond) = plt.subplots(1, 2, figsize=(11, 4.5))
    for label, rows in sorted(series.items()):
        rows = sorted(rows, key=lambda r: int(r["level"]))
        levels = [int(r["level"]) for r in rows]
        its = [number(r["iterations"]) for r in rows]
        conds = [number(r["cond"]) for r in rows]
        pts = [(l, i) for l, i in zip(levels, its) if i is not None]
        if pts:
            ax_it.plot(*zip(*pts), marker="o", label=label)
        pts = [(l, c) for l, c in zip(levels, conds) if c is not None and c > 0]
        if pts:
            ax_cond.semilogy(*zip(*pts), marker="s", label=label)
    ax_it.set_xlabel("fine level")
    ax_it.set_ylabel("iterations")
    ax_cond.set_xlabel("fine level")
    ax_cond.set_ylabel("condition number")
    for ax in (ax_it, ax_cond):
        ax.grid(True, alpha=0.3)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize="x-small")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out} ({len(series)} series)")


if __name__ == "__main__":
    main()
"#;

fn py_str(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Write a standalone matplotlib script that plots the table at `csv_path`.
/// The CSV must exist; an empty table yields a script that draws empty axes.
pub fn emit_plot_script(csv_path: &Path, script_path: &Path) -> Result<()> {
    if !csv_path.is_file() {
        return Err(Error::InvalidArgument(format!(
            "CSV file {} does not exist",
            csv_path.display()
        )));
    }
    let columns = format!(
        "[{}]",
        CSV_COLUMNS.iter().map(|c| py_str(c)).collect::<Vec<_>>().join(", ")
    );
    let script = TEMPLATE
        .replace("@CSV@", &py_str(&csv_path.to_string_lossy()))
        .replace("@COLUMNS@", &columns);
    std::fs::write(script_path, script)?;
    Ok(())
}
