"""Command-line front end.

Subcommands: `codes list`, `verify <protocol>`, `simulate --config <path>`,
`sweep --config <path>`, `faults <protocol> --out <csv>`.

Exit codes: 0 success, 2 configuration error, 3 verification failure,
4 resource guard (dense-oracle size limit).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys

import numpy as np

from .codes import get_code, list_codes, preparation_circuit, reduce_logical
from .config import ConfigError, expand_sweep, load_config
from .distnet import LinkChannel, run_trials
from .executor import Executor
from .noise import (ErrorModel, campaign_ft_syndrome, campaign_ghz,
                    campaign_interface)
from .pauli import PauliOperator
from .statevector import ResourceError, StateVector
from .stats import summarize
from .tableau import StabilizerTableau
from .telegates import cz_by_measurement, prepare_encoded_bell_nonft

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_RESOURCE = 4


# -- codes list --------------------------------------------------------------

def cmd_codes_list(out=sys.stdout) -> int:
    rows = []
    for name in list_codes():
        code = get_code(name)
        d_label = "X-only" if code.name in ("bitflip3",) else \
            "Z-only" if code.name in ("phaseflip3",) else str(code.d)
        rows.append({
            "name": name, "n": code.n, "k": code.k, "d": d_label,
            "generators": " ".join(str(g) for g in code.generators),
            "reduced_wx": reduce_logical(code, "X").weight if code.generators
            else code.logical_x[0].weight,
            "reduced_wz": reduce_logical(code, "Z").weight if code.generators
            else code.logical_z[0].weight,
        })
    widths = {"name": max(len(r["name"]) for r in rows)}
    print(f"{'name':<{widths['name']}}  n  k  d       wX wZ  generators",
          file=out)
    for r in rows:
        print(f"{r['name']:<{widths['name']}}  {r['n']}  {r['k']}  "
              f"{r['d']:<7} {r['reduced_wx']}  {r['reduced_wz']}  "
              f"{r['generators']}", file=out)
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def _two_qubit_stabilizer_states():
    """All 60 two-qubit stabilizer states as (g1, g2) generator pairs,
    deduplicated by stabilizer group."""
    paulis = []
    for x in range(4):
        for z in range(4):
            if (x, z) == (0, 0):
                continue
            for e in range(4):
                p = PauliOperator(2, x, z, e)
                # keep the hermitian (sign +/-1) representatives
                if p.is_hermitian():
                    paulis.append(p)
    seen = set()
    for g1, g2 in itertools.combinations(paulis, 2):
        if not g1.commutes(g2):
            continue
        prod = g1 * g2
        if prod.x == 0 and prod.z == 0:   # dependent pair
            continue
        group = frozenset(str(p) for p in
                          (g1, g2, prod, PauliOperator.identity(2)))
        if group in seen:
            continue
        seen.add(group)
        yield g1, g2


def verify_cz(report: dict) -> bool:
    """cz_by_measurement against the dense oracle on every 2-qubit
    stabilizer input, across every realizable measurement branch."""
    states = list(_two_qubit_stabilizer_states())
    checked = skipped = 0
    for g1, g2 in states:
        prep = preparation_circuit([g1, g2], 2)
        base = StateVector(3)
        Executor(base).run_circuit(prep, qubit_map=(0, 1))
        base.apply("H", 2)            # ancilla in |+>
        expect = StateVector(3)       # oracle: CZ on data, ancilla |s3>
        Executor(expect).run_circuit(prep, qubit_map=(0, 1))
        expect.apply("CZ", 0, 1)
        for forces in itertools.product((1, -1), repeat=3):
            sv = base.copy()
            try:
                _, (_, _, s3) = cz_by_measurement(sv, 0, 1, 2, forces=forces)
            except ValueError:
                skipped += 1          # zero-probability branch
                continue
            checked += 1
            want = expect.copy()
            if s3 == -1:
                want.apply("X", 2)
            if not sv.equals_up_to_phase(want, tol=1e-10):
                report["failure"] = {"input": [str(g1), str(g2)],
                                     "forces": list(forces)}
                return False
    report["inputs"] = len(states)
    report["branches_checked"] = checked
    report["branches_unrealizable"] = skipped
    return True


def verify_bellprep(report: dict) -> bool:
    """Noiseless encoded Bell preparation is stabilized by both blocks'
    generators and the logical XX / ZZ correlators."""
    code = get_code("513")
    nq = 2 * code.n + 4
    ex = Executor(StabilizerTableau(nq), rng=np.random.default_rng(0))
    prepare_encoded_bell_nonft(ex, code)
    want = [g.embed(nq, tuple(range(code.n))) for g in code.generators]
    want += [g.embed(nq, tuple(range(code.n, 2 * code.n)))
             for g in code.generators]
    blocks = (tuple(range(code.n)), tuple(range(code.n, 2 * code.n)))
    for op in (code.logical_x[0], code.logical_z[0]):
        want.append(op.embed(nq, blocks[0]) * op.embed(nq, blocks[1]))
    bad = [str(op) for op in want if ex.state.peek_observable(op) != 1]
    report["checked_operators"] = len(want)
    if bad:
        report["failure"] = {"not_stabilized": bad}
        return False
    return True


def verify_ft_syndrome(report: dict) -> bool:
    campaign = campaign_ft_syndrome()
    bad = campaign.violations()
    report["faults"] = len(campaign.results)
    report["violations"] = len(bad)
    if bad:
        report["failure"] = {"first": bad[0].location}
        return False
    return True


def verify_interface(report: dict) -> bool:
    campaign = campaign_interface()
    bad = campaign.violations()
    classes = sorted({r.detail for r in campaign.results
                      if r.verification_outcome == 1})
    report["faults"] = len(campaign.results)
    report["violations"] = len(bad)
    report["caught_state_classes"] = classes
    if bad:
        report["failure"] = {"first": bad[0].location}
        return False
    return True


_VERIFIERS = {
    "cz": verify_cz,
    "bellprep": verify_bellprep,
    "ft-syndrome": verify_ft_syndrome,
    "interface": verify_interface,
}


def cmd_verify(protocol: str, out=sys.stdout) -> int:
    report: dict = {"protocol": protocol}
    ok = _VERIFIERS[protocol](report)
    report["status"] = "pass" if ok else "fail"
    json.dump(report, out, sort_keys=True)
    out.write("\n")
    return EXIT_OK if ok else EXIT_VERIFY


# -- simulate / sweep --------------------------------------------------------

def _run_cell(cfg):
    channel = LinkChannel(cfg.p_success, cfg.t_attempt, cfg.bell_error)
    noise = ErrorModel(p1=cfg.p1, p2=cfg.p2, p_meas=cfg.p_meas,
                       p_mem=cfg.p_mem, bell_error=cfg.bell_error)
    if noise.is_zero():
        noise = None
    return run_trials(channel, cfg.code, cfg.trials, seed=cfg.seed,
                      noise=noise, ec_mode=cfg.ec_mode,
                      ec_cycle_time=cfg.ec_cycle_time, fixed_n=cfg.fixed_n)


def cmd_simulate(cfg, out=sys.stdout) -> int:
    records = _run_cell(cfg)
    stats = summarize(records)
    if cfg.records_path:
        with open(cfg.records_path, "w") as fh:
            for r in records:
                fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    summary = {"name": cfg.name, **stats.to_dict()}
    if cfg.summary_path:
        with open(cfg.summary_path, "w") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)
            fh.write("\n")
    json.dump(summary, out, sort_keys=True)
    out.write("\n")
    return EXIT_OK


_SWEEP_FIELDS = ("n_trials", "n_completed", "logical_errors",
                 "logical_error_rate", "wilson_low", "wilson_high",
                 "heralded_aborts", "abort_rate", "mean_wait", "p90_wait",
                 "mean_ec_cycles")


def cmd_sweep(cfg, out=sys.stdout) -> int:
    cells = list(expand_sweep(cfg))
    axis_names = [ax.parameter for ax in cfg.sweep]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(axis_names + list(_SWEEP_FIELDS))
    rows = []
    for values, cell_cfg in cells:
        stats = summarize(_run_cell(cell_cfg)).to_dict()
        row = [values[a] for a in axis_names] + \
            [stats[f] for f in _SWEEP_FIELDS]
        writer.writerow(row)
        rows.append(row)
    if cfg.records_path:
        with open(cfg.records_path, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(axis_names + list(_SWEEP_FIELDS))
            w.writerows(rows)
    return EXIT_OK


# -- faults ------------------------------------------------------------------

_CAMPAIGNS = {
    "interface": campaign_interface,
    "ft-syndrome": campaign_ft_syndrome,
    "ghz": campaign_ghz,
}


def cmd_faults(protocol: str, out_path: str) -> int:
    campaign = _CAMPAIGNS[protocol]()
    campaign.to_csv(out_path)
    bad = campaign.violations()
    print(f"{protocol}: {len(campaign.results)} faults, "
          f"{len(bad)} violations -> {out_path}")
    return EXIT_OK if not bad else EXIT_VERIFY


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distqec",
        description="Stabilizer simulation of error-corrected, "
                    "entanglement-mediated two-node logical operations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_codes = sub.add_parser("codes", help="code registry queries")
    codes_sub = p_codes.add_subparsers(dest="codes_command", required=True)
    codes_sub.add_parser("list", help="print the code registry table")

    p_verify = sub.add_parser("verify", help="exhaustive protocol checks")
    p_verify.add_argument("protocol", choices=sorted(_VERIFIERS))

    p_sim = sub.add_parser("simulate", help="Monte Carlo trial batch")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--trials", type=int, default=None)

    p_sweep = sub.add_parser("sweep", help="config sweep to CSV")
    p_sweep.add_argument("--config", required=True)

    p_faults = sub.add_parser("faults", help="fault campaign to CSV")
    p_faults.add_argument("protocol", choices=sorted(_CAMPAIGNS))
    p_faults.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "codes":
            return cmd_codes_list()
        if args.command == "verify":
            return cmd_verify(args.protocol)
        if args.command == "simulate":
            overrides = {}
            if args.seed is not None:
                overrides["seed"] = args.seed
            if args.trials is not None:
                overrides["trials"] = args.trials
            cfg = load_config(args.config, overrides=overrides)
            return cmd_simulate(cfg)
        if args.command == "sweep":
            cfg = load_config(args.config)
            return cmd_sweep(cfg)
        if args.command == "faults":
            return cmd_faults(args.protocol, args.out)
        raise AssertionError(args.command)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
