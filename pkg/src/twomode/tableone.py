"""The 2 x 6 x 5 qualitative-dynamics grid and its comparison report.

Rows are initial field states, columns initial atomic states, and the two
blocks are the symmetric (phi = 0) and antisymmetric (phi = pi) coupling
cases.  For the three separable atomic columns the grid also records
whether entanglement is generated at all.

Expected entries encode the published summary table.  Cells whose
published label carries a '/' admit more than one behavior depending on
the state drawn from the class; for those the report records which branch
the default parameters select.  Cells where the published label is not
reproduced by exact numerics under the documented defaults are reported as
findings with the measured evidence, not silently adjusted; see the README
for the list of known ones.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .classify import EPS_ZERO_DEFAULT
from .scenarios import FieldSpec, ModelParams, Scenario, run_scenario
from .scenarios import _fmt  # shared numeric formatting

ATOM_COLUMNS = ("ee", "eg", "gg", "phi", "psi")
SEPARABLE_COLUMNS = ("ee", "eg", "gg")


@dataclass(frozen=True)
class TableOneParams:
    """Default parameter choices for the grid (the publication names none)."""

    n: int = 2
    m: int = 1
    alpha: float = 1.0
    beta: float = 0.5
    xi: float = 0.5
    nbar: float = 0.5
    horizon: float = 25.0
    samples: int = 501
    n_max: int = 12
    # thermal / squeezed tails at n_max = 12 sit above the library default;
    # the squeezed-vacuum tail at xi = 0.5 is 4.7e-6
    eps_trunc: float = 1e-5
    eps_zero: float = EPS_ZERO_DEFAULT
    g: float = 1.0

    @property
    def n_max_fock(self) -> int:
        return self.n + self.m + 2


def _rows(p: TableOneParams, picture: str) -> list[tuple[str, FieldSpec, int]]:
    """(row name, field spec, n_max) per row; SC row 4 uses the mixed
    coherent amplitudes whose one-mode image has amplitude alpha."""
    sq2 = np.sqrt(2)
    if picture == "sc":
        coherent = FieldSpec("coherent", ((p.alpha + p.beta) / sq2, (p.alpha - p.beta) / sq2))
    else:
        coherent = FieldSpec("coherent", (p.alpha, p.beta))
    return [
        ("fock", FieldSpec("fock", (p.n, p.m)), p.n_max_fock),
        ("eta", FieldSpec("eta", (p.n, p.m)), p.n_max_fock),
        ("thermal", FieldSpec("thermal", (p.nbar,)), p.n_max),
        ("coherent", coherent, p.n_max),
        ("squeezed_pair", FieldSpec("squeezed_pair", (p.xi,)), p.n_max),
        ("tmss", FieldSpec("tmss", (p.xi,)), p.n_max),
    ]


# Published expectations: (generation, allowed labels).  Generation is None
# for the initially entangled columns where the question does not arise.
_YES, _NO = True, False
EXPECTED = {
    "sc": {
        "fock": [(_NO, {"NONE"}), (_YES, {"DI"}), (_YES, {"DI", "SD"}), (None, {"SD"}), (None, {"SD"})],
        "eta": [(_NO, {"NONE"}), (_YES, {"DI"}), (_YES, {"SD"}), (None, {"SD"}), (None, {"SD"})],
        "thermal": [(_NO, {"NONE"}), (_YES, {"DI"}), (_YES, {"SD"}), (None, {"AL", "SD"}), (None, {"SD"})],
        "coherent": [(_YES, {"AL", "SD"}), (_YES, {"SD"}), (_YES, {"AL", "SD"}), (None, {"AL", "SD"}), (None, {"AL", "SD"})],
        "squeezed_pair": [(_NO, {"NONE"}), (_YES, {"DI"}), (_YES, {"SD"}), (None, {"AL", "SD"}), (None, {"SD"})],
        "tmss": [(_YES, {"AL", "SD"}), (_YES, {"SD"}), (_YES, {"AL", "SD"}), (None, {"AL"}), (None, {"SD"})],
    },
    "ac": {
        "fock": [(_YES, {"SD"}), (_YES, {"SD"}), (_YES, {"SD", "DI"}), (None, {"SD"}), (None, {"SD", "AL"})],
        "eta": [(_NO, {"NONE"}), (_NO, {"NONE"}), (_NO, {"NONE"}), (None, {"SD"}), (None, {"SD"})],
        "thermal": [(_NO, {"NONE"}), (_NO, {"NONE"}), (_NO, {"NONE"}), (None, {"SD"}), (None, {"SD"})],
        "coherent": [(_NO, {"NONE"}), (_NO, {"NONE"}), (_NO, {"NONE"}), (None, {"SD"}), (None, {"SD"})],
        "squeezed_pair": [(_YES, {"SD"}), (_YES, {"SD"}), (_YES, {"SD"}), (None, {"SD"}), (None, {"SD"})],
        "tmss": [(_NO, {"NONE"}), (_NO, {"NONE"}), (_NO, {"NONE"}), (None, {"SD"}), (None, {"SD"})],
    },
}

# Published footnote: equal Fock occupations generate no entanglement from
# any separable atomic state in the antisymmetric case.
FOOTNOTE_COLUMNS = SEPARABLE_COLUMNS


@dataclass(frozen=True)
class TableOneCell:
    picture: str
    row: str
    column: str
    expected_generation: bool | None
    expected_labels: frozenset
    observed_generation: bool
    observed_label: str
    min_after_generation: float | None
    max_dead_interval: float
    ambiguous: bool

    @property
    def generation_matches(self) -> bool:
        if self.expected_generation is None:
            return True
        return self.expected_generation == self.observed_generation

    @property
    def label_matches(self) -> bool:
        if self.expected_generation is False:
            return self.observed_label == "NONE"
        return self.observed_label in self.expected_labels


@dataclass(frozen=True)
class TableOneReport:
    params: TableOneParams
    cells: tuple[TableOneCell, ...]
    footnote_cells: tuple[TableOneCell, ...]

    @property
    def mismatches(self) -> tuple[TableOneCell, ...]:
        return tuple(
            c for c in self.cells + self.footnote_cells
            if not (c.generation_matches and c.label_matches)
        )

    @property
    def unambiguous_mismatches(self) -> tuple[TableOneCell, ...]:
        return tuple(c for c in self.mismatches if not c.ambiguous)

    def render_text(self) -> str:
        buf = io.StringIO()
        p = self.params
        buf.write("qualitative dynamics grid\n")
        buf.write(
            f"defaults: fock n={p.n} m={p.m}, alpha={p.alpha}, beta={p.beta}, "
            f"xi={p.xi}, nbar={p.nbar}, horizon g*t={p.horizon}, "
            f"n_max={p.n_max} (fock rows {p.n_max_fock}), eps_zero={p.eps_zero}\n\n"
        )
        for picture in ("sc", "ac"):
            buf.write(f"== {picture.upper()} ==\n")
            header = f"{'field':15s}" + "".join(f"{c:>18s}" for c in ATOM_COLUMNS)
            buf.write(header + "\n")
            for row in EXPECTED[picture]:
                cells = [c for c in self.cells if c.picture == picture and c.row == row]
                line = f"{row:15s}"
                for c in cells:
                    gen = "" if c.expected_generation is None else ("Y," if c.observed_generation else "N,")
                    mark = "" if (c.generation_matches and c.label_matches) else ("*" if c.ambiguous else "!")
                    line += f"{gen + c.observed_label + mark:>18s}"
                buf.write(line + "\n")
            buf.write("\n")
        if self.footnote_cells:
            buf.write("footnote (equal occupations, antisymmetric case): ")
            buf.write(
                ", ".join(
                    f"{c.column}:{'no generation' if not c.observed_generation else 'GENERATED'}"
                    for c in self.footnote_cells
                )
                + "\n"
            )
        if self.mismatches:
            buf.write("\nfindings (observed differs from the published label):\n")
            for c in self.mismatches:
                exp = "/".join(sorted(c.expected_labels))
                buf.write(
                    f"  {c.picture.upper()} {c.row} + {c.column}: observed "
                    f"{c.observed_label} (min C after generation = "
                    f"{_fmt(c.min_after_generation or 0.0)}), published {exp}"
                    f"{' [ambiguous entry]' if c.ambiguous else ''}\n"
                )
        else:
            buf.write("\nno findings: every cell matches the published label\n")
        return buf.getvalue()

    def render_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            "picture,row,column,expected_generation,expected_labels,"
            "observed_generation,observed_label,generation_matches,label_matches,"
            "ambiguous,min_after_generation,max_dead_interval\n"
        )
        for c in self.cells + self.footnote_cells:
            buf.write(
                ",".join(
                    [
                        c.picture,
                        c.row,
                        c.column,
                        "" if c.expected_generation is None else str(c.expected_generation),
                        "/".join(sorted(c.expected_labels)),
                        str(c.observed_generation),
                        c.observed_label,
                        str(c.generation_matches),
                        str(c.label_matches),
                        str(c.ambiguous),
                        "" if c.min_after_generation is None else _fmt(c.min_after_generation),
                        _fmt(c.max_dead_interval),
                    ]
                )
                + "\n"
            )
        return buf.getvalue()


def _evaluate_cell(picture, row, column, field, n_max, p: TableOneParams,
                   expected) -> TableOneCell:
    scenario = Scenario(
        name=f"table1-{picture}-{row}-{column}",
        picture=picture,
        atomic=column,
        field=field,
        params=ModelParams(g=p.g, phi=0.0, n_max=n_max, eps_trunc=p.eps_trunc),
        t_max=p.horizon,
        samples=p.samples,
        measures=("concurrence",),
        eps_zero=p.eps_zero,
    )
    result = run_scenario(scenario)
    v = result.verdict
    widths = [hi - lo for lo, hi in v.dead_intervals]
    exp_gen, exp_labels = expected
    return TableOneCell(
        picture=picture,
        row=row,
        column=column,
        expected_generation=exp_gen,
        expected_labels=frozenset(exp_labels),
        observed_generation=v.generated,
        observed_label=v.label,
        min_after_generation=v.min_after_generation,
        max_dead_interval=max(widths) if widths else 0.0,
        ambiguous=len(exp_labels) > 1,
    )


def table_one_report(params: TableOneParams | None = None) -> TableOneReport:
    """Evaluate the full grid plus the equal-occupation footnote cases."""
    p = params or TableOneParams()
    cells = []
    for picture in ("sc", "ac"):
        for row, field, n_max in _rows(p, picture):
            for col, expected in zip(ATOM_COLUMNS, EXPECTED[picture][row]):
                cells.append(
                    _evaluate_cell(picture, row, col, field, n_max, p, expected)
                )
    footnote = []
    nn = max(p.n, 1)
    field = FieldSpec("fock", (nn, nn))
    for col in FOOTNOTE_COLUMNS:
        footnote.append(
            _evaluate_cell(
                "ac", f"fock({nn},{nn})", col, field, 2 * nn + 2, p,
                (_NO, {"NONE"}),
            )
        )
    return TableOneReport(p, tuple(cells), tuple(footnote))
