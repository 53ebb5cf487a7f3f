"""Command-line entry point: ``nonadditive <subcommand>``.

Exit codes: 0 when every check passes, 1 when a verification check fails,
2 for usage or input errors.
"""

from __future__ import annotations

import functools
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__
from ._accel import BACKEND
from .automorph import MAX_DENSE_N as AUTO_DENSE_N
from .automorph import counterexample_suite, verify_lemma2
from .bounds import check_table, crossover_table, encoded_qubits, table_csv
from .classical import CodeParams, build_generators, full_code, lemma1_admissible, read_code
from .combinat import MAX_ENUM_N, asymptotic_fraction, codespace_size, kl_from_n, to_bitstring
from .erasure import broken_control_basis, fidelity_experiment, fidelity_experiment_basis
from .lift import build_basis, lift_qubit
from .projector import (
    MAX_PROJECTOR_N,
    audit_printed_formula,
    build_projector,
    oracle_coefficients,
    projector_selfcheck,
    sector_arrays,
)
from .verifier import MAX_RANK_N, error_span_rank, verify_distance2

ORDERING = "weight classes ascending; within a class, decreasing big-endian integer value"
N_CONVENTION = "l = ((n-3)/2) mod 2, k = (n-3-2l)/4"
FIDELITY_TOL = 1e-9
CONTROL_CEILING = 0.99


# ---------------------------------------------------------------------------
# helpers


def _resolve(n, k, l, dim) -> CodeParams:
    if n is not None:
        if k is not None or l is not None:
            raise click.UsageError("give either --n or --k/--l, not both")
        try:
            k, l = kl_from_n(n)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    elif k is None or l is None:
        raise click.UsageError("give --n, or both --k and --l")
    try:
        return CodeParams(k, l, dim)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def code_options(func):
    @click.option("--n", "n", type=int, default=None, help="Odd block length n >= 3.")
    @click.option("--k", "k", type=int, default=None, help="Family index k >= 0.")
    @click.option("--l", "l", type=int, default=None, help="Family index l in {0, 1}.")
    @click.option("--dim", type=int, default=2, show_default=True, help="Local dimension D.")
    @functools.wraps(func)
    def wrapper(*args, n, k, l, dim, **kwargs):
        return func(*args, params_args=(n, k, l, dim), **kwargs)

    return wrapper


def _check(name: str, passed: bool, detail="") -> dict:
    return {"name": name, "pass": bool(passed), "detail": detail}


def _report(subcommand: str, parameters: dict, checks: list[dict], results: dict,
            witnesses: list | None = None, seed: int | None = None, started: float | None = None) -> dict:
    return {
        "tool": "nonadditive",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": parameters,
        "provenance": {"seed": seed, "ordering": ORDERING, "n_convention": N_CONVENTION, "backend": BACKEND},
        "checks": checks,
        "witnesses": witnesses or [],
        "results": results,
        "pass": all(c["pass"] for c in checks),
        "timing": {"seconds": round(time.perf_counter() - started, 6) if started else None},
    }


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, default=str) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    sys.exit(0 if report["pass"] else 1)


output_option = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                             help="Write the report here instead of stdout.")
jobs_option = click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
                           help="Worker threads for independent checks.")


@click.group()
@click.version_option(__version__, prog_name="nonadditive")
def main():
    """Build and verify the self-complementary distance-2 code family."""


# ---------------------------------------------------------------------------
# construct


@main.command()
@code_options
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--codewords", type=click.Path(dir_okay=False), default=None,
              help="Also write the classical codewords, one per line.")
@click.option("--kets", type=click.Path(dir_okay=False), default=None,
              help="Also write the quantum basis kets, one per line.")
def construct(params_args, fmt, codewords, kets):
    """Emit the classical code and the quantum basis."""
    params = _resolve(*params_args)
    if params.n > MAX_ENUM_N:
        raise click.UsageError(f"n={params.n} is beyond the enumeration cap {MAX_ENUM_N}")
    basis = build_basis(params)
    if params.D == 2:
        words = full_code(params).bitstrings()
    else:
        words = [to_bitstring(g, params.n) for g in build_generators(params)]
    ket_lines = [k.to_text() for k in basis.kets]
    if codewords:
        Path(codewords).write_text("".join(w + "\n" for w in words))
    if kets:
        Path(kets).write_text("".join(k + "\n" for k in ket_lines))

    if fmt == "json":
        out = {"params": params.as_dict(), "ordering": ORDERING, "codewords": words,
               "M": len(basis), "kets": [k.to_dict() for k in basis.kets]}
        click.echo(json.dumps(out, indent=2))
        return
    label = "classical code" if params.D == 2 else "classical generators"
    click.echo(f"# {label}: n={params.n} K={len(words)}")
    for w in words:
        click.echo(w)
    click.echo(f"# quantum code: n={params.n} M={len(basis)} D={params.D}")
    for line in ket_lines:
        click.echo(line)


# ---------------------------------------------------------------------------
# verify


@main.command()
@code_options
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Classical code file (one binary word per line) to lift and verify instead.")
@click.option("--span-rank/--no-span-rank", default=False, help="Also compute the error-span rank (qubits, n <= 13).")
@jobs_option
@output_option
def verify(params_args, input_path, span_rank, jobs, output):
    """Exact single-site error checks for a family code or a supplied classical code."""
    started = time.perf_counter()
    checks, witnesses, results = [], [], {}
    n_, k_, l_, dim = params_args
    if input_path:
        if dim != 2:
            raise click.UsageError("--input codes are lifted as qubit codes; drop --dim")
        try:
            code = read_code(input_path)
        except (OSError, ValueError) as exc:
            raise click.UsageError(f"cannot read {input_path}: {exc}") from exc
        parameters = {"input": str(input_path), "n": code.n, "D": 2}
        ok, diag = lemma1_admissible(code)
        results["classical"] = diag.as_dict()
        checks.append(_check("lemma1_admissible", ok, diag.message))
        if not ok:
            if diag.witness:
                witnesses.append({"check": "lemma1_admissible", "pair": diag.witness})
            _emit(_report("verify", parameters, checks, results, witnesses, started=started), output)
        basis = lift_qubit(code)
    else:
        params = _resolve(*params_args)
        parameters = params.as_dict()
        basis = build_basis(params)
        if params.D == 2:
            code = full_code(params)
            ok, diag = lemma1_admissible(code)
            results["classical"] = diag.as_dict()
            checks.append(_check("lemma1_admissible", ok, diag.message))
        else:
            checks.append(_check("orbits_disjoint", basis.orbits_disjoint(), "shift orbits of the generators"))
        checks.append(_check("codespace_size", len(basis) == codespace_size(params),
                             f"M = {len(basis)}"))
    gram = basis.gram()
    diag_ok = np.array_equal(gram, np.einsum("ab,k->abk", np.eye(len(basis), dtype=np.int64),
                                             gram[0, 0] if len(basis) else np.zeros(basis.D, np.int64)))
    checks.append(_check("gram_scalar", diag_ok, "Gram matrix is a multiple of the identity"))
    report = verify_distance2(basis, jobs=jobs)
    results["kl"] = report.as_dict()
    results["M"] = len(basis)
    checks.append(_check("distance2", report.passed, f"{len(report.checks)} single-site errors"))
    witnesses.extend(report.witnesses)
    if span_rank:
        if basis.D != 2 or basis.n > MAX_RANK_N:
            raise click.UsageError(f"--span-rank needs a qubit code with n <= {MAX_RANK_N}")
        rank = error_span_rank(basis)
        results["error_span_rank"] = rank
        results["hilbert_dimension"] = 2**basis.n
    _emit(_report("verify", parameters, checks, results, witnesses, started=started), output)


# ---------------------------------------------------------------------------
# projector


@main.command()
@code_options
@click.option("--audit/--no-audit", default=False, help="Include the closed-form audit table.")
@click.option("--export", type=click.Path(dir_okay=False), default=None, help="Write the Pauli terms as JSON.")
@output_option
def projector(params_args, audit, export, output):
    """Build the code projector as a Pauli sum and check it exactly."""
    started = time.perf_counter()
    params = _resolve(*params_args)
    if params.D != 2 or params.n > MAX_PROJECTOR_N:
        raise click.UsageError(f"projector needs a qubit code with n <= {MAX_PROJECTOR_N}")
    proj = build_projector(params)
    rep = projector_selfcheck(params, proj)
    checks = [_check(c.name, c.passed, c.detail) for c in rep.checks]
    witnesses = [{"check": c.name, **c.witness} for c in rep.checks if c.witness]
    c0, _ = sector_arrays(proj)
    oracle = oracle_coefficients(params)
    checks.append(_check("brute_force_oracle", bool((oracle == c0).all()),
                         "coefficients match a direct sum over generators"))
    results = {"selfcheck": rep.as_dict()}
    if audit:
        results["audit"] = audit_printed_formula(params).as_dict()
    if export:
        Path(export).write_text(json.dumps(proj.to_json_terms()) + "\n")
        results["exported_terms"] = len(proj)
    _emit(_report("projector", params.as_dict(), checks, results, witnesses, started=started), output)


# ---------------------------------------------------------------------------
# automorph


@main.command()
@code_options
@click.option("--perm-samples", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--counterexamples/--no-counterexamples", default=True, show_default=True,
              help=f"Run the dense out-of-family unitaries (n <= {AUTO_DENSE_N}).")
@jobs_option
@output_option
def automorph(params_args, perm_samples, seed, counterexamples, jobs, output):
    """Exhaustive (b, f) sweep over seeded permutations."""
    started = time.perf_counter()
    params = _resolve(*params_args)
    if params.D != 2:
        raise click.UsageError("automorphism checks are for qubit codes")
    try:
        rep = verify_lemma2(params, perm_samples, seed, jobs=jobs)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    checks = [_check("parity_law", rep.passed, "preserved exactly when |f| is even")]
    results = {"lemma2": rep.as_dict()}
    if counterexamples and params.n <= AUTO_DENSE_N:
        cx = counterexample_suite(params)
        results["counterexamples"] = cx.as_dict()
        checks.append(_check("counterexamples_fail", cx.all_fail, "every out-of-family unitary leaves the code"))
    _emit(_report("automorph", {**params.as_dict(), "perm_samples": perm_samples}, checks, results,
                  rep.violations, seed=seed, started=started), output)


# ---------------------------------------------------------------------------
# bounds


@main.command()
@click.option("--max-n", type=int, default=25, show_default=True)
@click.option("--json", "fmt", flag_value="json", default=True, help="JSON report (default).")
@click.option("--csv", "fmt", flag_value="csv", help="CSV table instead of the JSON report.")
@output_option
def bounds(max_n, fmt, output):
    """Compare code sizes with the bounds and earlier families."""
    started = time.perf_counter()
    if max_n < 5 or max_n % 2 == 0:
        raise click.UsageError("--max-n must be odd and >= 5")
    rows = crossover_table(max_n)
    problems = check_table(rows)
    if fmt == "csv":
        text = table_csv(rows)
        if output:
            Path(output).write_text(text)
        else:
            click.echo(text, nl=False)
        sys.exit(1 if problems else 0)
    logq, est = encoded_qubits(max_n)
    frac = asymptotic_fraction(max_n)
    results = {
        "rows": [r.as_dict() for r in rows],
        "asymptotics": {"n": max_n, "log2_M": logq, "estimate": est, "fill_exact": str(frac.exact),
                        "fill": frac.value, "fill_estimate": frac.approx},
    }
    checks = [_check("table_invariants", not problems, "Rains bound, additive record, crossover at n = 11")]
    _emit(_report("bounds", {"max_n": max_n}, checks, results, problems, started=started), output)


# ---------------------------------------------------------------------------
# simulate


@main.command()
@code_options
@click.option("--trials", type=click.IntRange(min=1), default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--site", type=int, default=None, help="Erase only this site (default: every site).")
@click.option("--control", is_flag=True, help="Run the broken two-ket control code instead.")
@output_option
def simulate(params_args, trials, seed, site, control, output):
    """Erase one qubit, recover, and report the fidelity."""
    started = time.perf_counter()
    if control:
        basis = broken_control_basis()
        parameters = {"control": "two-ket code swapped by X on site 0", "n": basis.n, "trials": trials}
        sites = None if site is None else [site]
        rep = fidelity_experiment_basis(basis, trials, seed, sites, strict=False)
        checks = [_check("control_fails", rep.min_fidelity < CONTROL_CEILING,
                         f"min fidelity {rep.min_fidelity:.6f} < {CONTROL_CEILING}")]
    else:
        params = _resolve(*params_args)
        if params.D != 2:
            raise click.UsageError("simulation is for qubit codes")
        if site is not None and not 0 <= site < params.n:
            raise click.UsageError(f"--site must be in [0, {params.n})")
        parameters = {**params.as_dict(), "trials": trials}
        rep = fidelity_experiment(params, trials, seed, None if site is None else [site])
        checks = [_check("fidelity", rep.min_fidelity >= 1 - FIDELITY_TOL,
                         f"min fidelity {rep.min_fidelity!r} >= 1 - {FIDELITY_TOL}")]
    _emit(_report("simulate", parameters, checks, {"fidelity": rep.as_dict()}, seed=seed, started=started), output)


if __name__ == "__main__":  # pragma: no cover
    main()
