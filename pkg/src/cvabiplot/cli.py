"""Command-line entry point and file I/O.

``cvabiplot fit --input data.csv --group-col species --out results`` reads a
CSV, fits by the requested route, and writes scores.csv, axes.csv,
report.json and biplot.svg into the output directory. Exit codes: 0 ok,
2 configuration error, 3 numeric/singularity error, 4 I/O or data error.
Failures print a single JSON line on stderr so callers can parse the
reason.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .biplot import layout as build_layout
from .biplot import select_variables
from .cva import Dataset, cluster_quality, fit_gsvd, fit_standard
from .errors import (
    ConfigError,
    CvaBiplotError,
    DataFileError,
    InternalConsistencyError,
    SingularScatterError,
)
from .kernels import DEFAULT_TOL, RankTolerance
from .svg import render_svg

_MISSING = {"", "na", "nan", "null", "none"}
# group labels only treat the unambiguous spellings as missing, so a group
# actually named "none" or "null" survives
_MISSING_LABEL = {"", "na", "nan"}
_FORMATS = ("svg", "csv", "json")


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    group_col: str
    variables: tuple = ()        # explicit variable columns; () = auto numeric
    drop: tuple = ()
    path: str = "auto"           # auto | standard | gsvd
    standardize: bool = True
    axes: str = "all"            # all | none | top:<k> | list:<names>
    tol: RankTolerance = DEFAULT_TOL
    out_dir: str = "out"
    formats: tuple = _FORMATS

    def __post_init__(self):
        if self.path not in ("auto", "standard", "gsvd"):
            raise ConfigError(f"unknown path selector: {self.path!r}")
        bad = [f for f in self.formats if f not in _FORMATS]
        if bad:
            raise ConfigError(f"unknown output formats: {', '.join(bad)}")
        if self.path == "gsvd" and not self.standardize:
            raise ConfigError("the gsvd path requires standardization")


@dataclass(frozen=True)
class Report:
    n: int
    p: int
    k: int
    path: str
    r: int
    s: int
    q: int
    eigenvalues: tuple
    cluster_quality: float
    eigenvalue_share: float
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        total = sum(self.eigenvalues)
        if abs(total - self.cluster_quality) > 1e-8 * max(1.0, abs(self.cluster_quality)):
            raise InternalConsistencyError(
                f"eigenvalue sum {total!r} does not match cluster quality "
                f"{self.cluster_quality!r}"
            )

    def to_json(self):
        doc = {
            "n": self.n,
            "p": self.p,
            "k": self.k,
            "path": self.path,
            "r": self.r,
            "s": self.s,
            "q": self.q,
            "eigenvalues": list(self.eigenvalues),
            "cluster_quality": self.cluster_quality,
            "eigenvalue_share": self.eigenvalue_share,
            "warnings": list(self.warnings),
        }
        return json.dumps(doc, indent=2) + "\n"


def _parse_cell(text):
    t = text.strip()
    if t.lower() in _MISSING:
        return None
    try:
        return float(t)
    except ValueError:
        raise ValueError(t)


def load_csv(path, config):
    """Read a header-ed CSV into a Dataset per the run configuration.

    Variable columns are the explicitly requested ones, or every column
    (minus the group column and ``drop``) whose non-missing cells all parse
    as numbers. Rows with a missing value in any retained column, or a
    missing group label, are dropped and counted. Returns
    ``(dataset, row_ids, warnings)`` with 1-based data-row ids.
    """
    try:
        with open(path, "r", encoding="utf-8-sig", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataFileError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    data = rows[1:]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise ConfigError(f"duplicate column names in header: {', '.join(dupes)}")
    if config.group_col not in header:
        raise ConfigError(f"group column {config.group_col!r} not in header {header}")
    gcol = header.index(config.group_col)
    width = len(header)
    for ridx, row in enumerate(data, start=1):
        if len(row) != width:
            raise DataFileError(f"{path}: row {ridx} has {len(row)} fields, expected {width}")

    warnings = []
    if config.variables:
        missing_cols = [v for v in config.variables if v not in header]
        if missing_cols:
            raise ConfigError(f"requested variables not in header: {', '.join(missing_cols)}")
        var_names = [v for v in config.variables if v != config.group_col]
    else:
        candidates = [h for h in header if h != config.group_col and h not in config.drop]
        var_names = []
        for name in candidates:
            j = header.index(name)
            ok = True
            seen_value = False
            for row in data:
                cell = row[j].strip()
                if cell.lower() in _MISSING:
                    continue
                seen_value = True
                try:
                    float(cell)
                except ValueError:
                    ok = False
                    break
            if ok and seen_value:
                var_names.append(name)
            else:
                warnings.append(f"ignoring non-numeric column {name!r}")
    var_names = [v for v in var_names if v not in config.drop]
    if not var_names:
        raise ConfigError("no numeric variable columns retained")
    var_idx = [header.index(v) for v in var_names]

    kept_rows = []
    kept_ids = []
    labels = []
    dropped = 0
    for ridx, row in enumerate(data, start=1):
        label = row[gcol].strip()
        if label.lower() in _MISSING_LABEL:
            dropped += 1
            continue
        values = []
        complete = True
        for v, j in zip(var_names, var_idx):
            try:
                x = _parse_cell(row[j])
            except ValueError:
                raise DataFileError(
                    f"{path}: unparseable numeric cell at row {ridx}, column {v!r}: {row[j]!r}"
                )
            if x is None:
                complete = False
                break
            values.append(x)
        if not complete:
            dropped += 1
            continue
        kept_rows.append(values)
        kept_ids.append(ridx)
        labels.append(label)
    if dropped:
        warnings.append(f"dropped {dropped} rows with missing values (complete-case)")
    if len(kept_rows) < 2:
        raise DataFileError(f"{path}: fewer than 2 complete rows after filtering")
    if len(set(labels)) < 2:
        raise ConfigError(
            f"group column {config.group_col!r} has fewer than 2 groups after filtering"
        )
    X = np.array(kept_rows, dtype=np.float64)
    if not np.isfinite(X).all():
        raise DataFileError(f"{path}: non-finite values in numeric columns")
    ds = Dataset(X=X, variable_names=tuple(var_names), group_labels=tuple(labels))
    return ds, kept_ids, warnings


def _resolve_axes(config, model, ds):
    selector = config.axes.strip()
    if selector == "all":
        return list(range(ds.p))
    if selector == "none":
        return []
    if selector.startswith("top:"):
        try:
            k = int(selector[4:])
        except ValueError:
            raise ConfigError(f"bad axis selector {selector!r}")
        if k < 1:
            raise ConfigError("axis selector top:<k> needs k >= 1")
        return select_variables(model, min(k, ds.p))
    if selector.startswith("list:"):
        names = [s.strip() for s in selector[5:].split(",") if s.strip()]
        missing = [s for s in names if s not in ds.variable_names]
        if missing:
            raise ConfigError(f"axis list names not in variables: {', '.join(missing)}")
        return [ds.variable_names.index(s) for s in names]
    raise ConfigError(f"bad axis selector {selector!r}")


def run_fit(config):
    """Load, fit, lay out and summarize. Returns (model, layout, report, extras)."""
    ds, row_ids, load_warnings = load_csv(config.input_path, config)
    n, p = ds.X.shape

    if config.path == "standard":
        model = fit_standard(ds, standardize_columns=config.standardize, tol=config.tol)
    elif config.path == "gsvd":
        model = fit_gsvd(ds, tol=config.tol)
    else:
        if n > p:
            try:
                model = fit_standard(
                    ds, standardize_columns=config.standardize, tol=config.tol
                )
            except SingularScatterError:
                if not config.standardize:
                    raise
                model = fit_gsvd(ds, tol=config.tol)
        else:
            if not config.standardize:
                raise ConfigError(
                    "n <= p needs the gsvd path, which requires standardization"
                )
            model = fit_gsvd(ds, tol=config.tol)

    lay = build_layout(model, ds)
    cq = cluster_quality(model)
    report = Report(
        n=n,
        p=p,
        k=model.group_structure.k,
        path=model.path,
        r=model.r,
        s=model.s,
        q=model.q,
        eigenvalues=tuple(float(v) for v in model.eigenvalues),
        cluster_quality=cq,
        eigenvalue_share=lay.eigenvalue_share,
        warnings=tuple(load_warnings) + model.warnings,
    )
    axis_indices = _resolve_axes(config, model, ds)
    return model, lay, report, {"row_ids": row_ids, "axis_indices": axis_indices, "dataset": ds}


def _f10(x):
    return f"{float(x):.10g}"


def write_outputs(model, lay, report, config, row_ids=None, axis_indices=None):
    """Write the requested artifacts; returns the list of paths written."""
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    if row_ids is None:
        row_ids = list(range(1, lay.points.shape[0] + 1))

    if "csv" in config.formats:
        p_scores = os.path.join(config.out_dir, "scores.csv")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        q = model.q
        w.writerow(["id", "group", "x", "y"] + [f"cv{i + 1}" for i in range(q)])
        names = lay.group_names
        for i in range(lay.points.shape[0]):
            row = [
                row_ids[i],
                names[int(lay.point_groups[i])],
                _f10(lay.points[i, 0]),
                _f10(lay.points[i, 1]),
            ]
            row += [_f10(v) for v in model.training_scores[i]]
            w.writerow(row)
        _write_text(p_scores, buf.getvalue())
        written.append(p_scores)

        p_axes = os.path.join(config.out_dir, "axes.csv")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            ["variable", "name", "plottable", "dir_x", "dir_y",
             "marker_value", "marker_x", "marker_y"]
        )
        axes = lay.axes
        if axis_indices is not None:
            wanted = set(axis_indices)
            axes = [ax for ax in axes if ax.variable in wanted]
        for ax in axes:
            base = [ax.variable, ax.name, "true" if ax.plottable else "false"]
            if not ax.plottable:
                w.writerow(base + ["", "", "", "", ""])
                continue
            for mk in ax.markers:
                w.writerow(
                    base
                    + [
                        _f10(ax.direction[0]),
                        _f10(ax.direction[1]),
                        _f10(mk.value),
                        _f10(mk.position[0]),
                        _f10(mk.position[1]),
                    ]
                )
        _write_text(p_axes, buf.getvalue())
        written.append(p_axes)

    if "json" in config.formats:
        p_report = os.path.join(config.out_dir, "report.json")
        _write_text(p_report, report.to_json())
        written.append(p_report)

    if "svg" in config.formats:
        p_svg = os.path.join(config.out_dir, "biplot.svg")
        _write_text(p_svg, render_svg(lay, axis_indices=axis_indices))
        written.append(p_svg)

    return written


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataFileError(f"cannot write {path}: {exc}") from exc


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cvabiplot",
        description="Canonical variate analysis biplots (classical and GSVD routes)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fit = sub.add_parser("fit", help="fit a model from a CSV and write artifacts")
    fit.add_argument("--input", required=True, help="input CSV path (UTF-8, header row)")
    fit.add_argument("--group-col", required=True, help="name of the group label column")
    fit.add_argument("--vars", default="", help="comma-separated variable columns")
    fit.add_argument("--drop", default="", help="comma-separated columns to exclude")
    fit.add_argument("--path", default="auto", choices=("auto", "standard", "gsvd"))
    fit.add_argument("--no-standardize", action="store_true",
                     help="center but do not rescale columns (standard path only)")
    fit.add_argument("--axes", default="all",
                     help="axes to draw: all, none, top:<k> or list:<names>")
    fit.add_argument("--tol", type=float, default=None,
                     help="relative rank tolerance override")
    fit.add_argument("--out", default="out", help="output directory")
    fit.add_argument("--formats", default="svg,csv,json",
                     help="comma-separated subset of svg,csv,json")
    return parser


def _split_csv_arg(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


def main(argv=None):
    """Run the CLI; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        tol = DEFAULT_TOL if args.tol is None else RankTolerance(relative_epsilon=args.tol)
        config = RunConfig(
            input_path=args.input,
            group_col=args.group_col,
            variables=_split_csv_arg(args.vars),
            drop=_split_csv_arg(args.drop),
            path=args.path,
            standardize=not args.no_standardize,
            axes=args.axes,
            tol=tol,
            out_dir=args.out,
            formats=_split_csv_arg(args.formats) or _FORMATS,
        )
        model, lay, report, extras = run_fit(config)
        write_outputs(
            model, lay, report, config,
            row_ids=extras["row_ids"], axis_indices=extras["axis_indices"],
        )
    except (ConfigError, ValueError) as exc:
        _fail(2, exc)
        return 2
    except (SingularScatterError, InternalConsistencyError, np.linalg.LinAlgError) as exc:
        _fail(3, exc)
        return 3
    except (DataFileError, OSError) as exc:
        _fail(4, exc)
        return 4
    except CvaBiplotError as exc:
        _fail(3, exc)
        return 3
    return 0


def _fail(code, exc):
    line = json.dumps({"error": str(exc), "code": code})
    print(line, file=sys.stderr)


def cli_main():
    raise SystemExit(main())


if __name__ == "__main__":
    cli_main()
