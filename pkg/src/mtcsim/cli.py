"""Configuration-driven command line front end.

Every experiment reads a strict JSON config, resolves defaults, and writes a
manifest plus delimited text tables into the output directory.  Identical
configs produce byte-identical data files; the manifest echoes the resolved
config so a run can be reproduced from its own output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .chain import ChainSpec, uniform_chain
from .propagate import one_period_propagator
from .spectrum import spectrum_sweep
from .dtc import stroboscopic_z, power_spectrum
from .schedule import canonical_schedule, apply_deformation, StageSchedule
from .braiding import run_protocol, multiwire_protocol
from .disorder import DisorderSpec, apply_disorder
from . import edoracle
from .bulkbands import (bulk_angle, bulk_gaps, bulk_params_from_products,
                        phs_residual, bulk_bloch_propagator, reconstruct_propagator)

__all__ = ["run", "load_config", "list_experiments", "main", "ConfigError"]

FMT = "%.17g"


class ConfigError(ValueError):
    pass


EXPERIMENTS = {
    "dtc": "stroboscopic period-doubling dynamics of a single wire and its subharmonic power spectrum",
    "spectrum-sweep": "quasienergy spectrum of the open wire along a parameter sweep, with edge-mode flags",
    "braid": "four-step adiabatic exchange of the two left edge species; correlations and exchange angle",
    "braid-disorder": "exchange protocol averaged over static disorder realizations",
    "braid-deformed": "exchange protocol with smooth drive deformations and a normalized-fidelity report",
    "multiwire": "exchange of left edge modes across two adjacent wires in an array",
    "oracle-check": "brute-force many-body cross-checks: spectra, mode rotations, spin-chain image, encoded-qubit runs",
    "bulk-bands": "closed-form bulk quasienergy bands, gaps, and particle-hole symmetry residuals",
}

_CHAIN_KEYS = {"N", "T", "JT", "DeltaT", "mu1T", "mu2T", "h2T"}
_SECTION_KEYS = {
    "dtc": {"n_max"},
    "sweep": {"parameter", "start", "stop", "num"},
    "schedule": {"periods_per_step", "f_set", "deformations", "deformation_scale"},
    "disorder": {"dJ", "dDelta", "dmu1", "dmu2", "h2_mean", "dh2", "realizations"},
    "multiwire": {"wires", "periods_per_step"},
    "bulk": {"k_num"},
    "oracle": {"seeds", "max_sites"},
}
_TOP_KEYS = {"experiment", "chain", "output_dir", "master_seed", "record_every",
             "threads"} | set(_SECTION_KEYS)

_REQUIRED = {
    "dtc": ("chain", "dtc"),
    "spectrum-sweep": ("chain", "sweep"),
    "braid": ("chain", "schedule"),
    "braid-deformed": ("chain", "schedule"),
    "braid-disorder": ("chain", "schedule", "disorder", "master_seed"),
    "multiwire": ("chain", "multiwire"),
    "oracle-check": ("chain",),
    "bulk-bands": ("chain", "bulk"),
}


def _reject_unknown(mapping, allowed, path):
    for key in mapping:
        if key not in allowed:
            raise ConfigError("unknown key %r at %s" % (key, path))


def load_config(path_or_dict):
    """Parse and validate a config, returning it with defaults resolved."""
    if isinstance(path_or_dict, dict):
        raw = json.loads(json.dumps(path_or_dict))
    else:
        with open(path_or_dict) as fh:
            raw = json.load(fh)
    if "experiment" not in raw:
        raise ConfigError("missing required field 'experiment'")
    exp = raw["experiment"]
    if exp not in EXPERIMENTS:
        raise ConfigError("unknown experiment %r" % exp)
    _reject_unknown(raw, _TOP_KEYS, "top level")
    for name, keys in _SECTION_KEYS.items():
        if name in raw:
            if not isinstance(raw[name], dict):
                raise ConfigError("section %r must be an object" % name)
            _reject_unknown(raw[name], keys, name)
    if "chain" not in raw:
        raise ConfigError("missing required field 'chain'")
    _reject_unknown(raw["chain"], _CHAIN_KEYS, "chain")
    for field in _REQUIRED[exp]:
        if field not in raw:
            raise ConfigError("experiment %r requires field %r" % (exp, field))

    cfg = {
        "experiment": exp,
        "chain": _chain_defaults(raw["chain"]),
        "output_dir": raw.get("output_dir", "out"),
        "record_every": int(raw.get("record_every", 2)),
        "threads": int(raw.get("threads", 1)),
    }
    if "master_seed" in raw:
        cfg["master_seed"] = int(raw["master_seed"])
    if exp == "dtc":
        cfg["dtc"] = {"n_max": int(raw["dtc"]["n_max"])}
    if exp == "spectrum-sweep":
        sw = raw["sweep"]
        for key in ("parameter", "start", "stop", "num"):
            if key not in sw:
                raise ConfigError("sweep requires field %r" % key)
        cfg["sweep"] = {"parameter": sw["parameter"], "start": float(sw["start"]),
                        "stop": float(sw["stop"]), "num": int(sw["num"])}
    if exp in ("braid", "braid-deformed", "braid-disorder"):
        sc = raw["schedule"]
        if "periods_per_step" not in sc:
            raise ConfigError("schedule requires field 'periods_per_step'")
        cfg["schedule"] = {
            "periods_per_step": int(sc["periods_per_step"]),
            "f_set": sc.get("f_set", "cos"),
            "deformations": bool(sc.get("deformations", exp == "braid-deformed")),
            "deformation_scale": float(sc.get("deformation_scale", 1.0)),
        }
        if cfg["schedule"]["f_set"] not in ("cos", "mixed"):
            raise ConfigError("schedule.f_set must be 'cos' or 'mixed'")
    if exp == "braid-disorder":
        dz = raw["disorder"]
        cfg["disorder"] = {
            "dJ": float(dz.get("dJ", 0.1)), "dDelta": float(dz.get("dDelta", 0.1)),
            "dmu1": float(dz.get("dmu1", 0.1)), "dmu2": float(dz.get("dmu2", 0.1)),
            "h2_mean": float(dz.get("h2_mean", 0.025)), "dh2": float(dz.get("dh2", 0.01)),
            "realizations": int(dz.get("realizations", 100)),
        }
    if exp == "multiwire":
        mw = raw["multiwire"]
        if "periods_per_step" not in mw:
            raise ConfigError("multiwire requires field 'periods_per_step'")
        cfg["multiwire"] = {"wires": int(mw.get("wires", 2)),
                            "periods_per_step": int(mw["periods_per_step"])}
    if exp == "bulk-bands":
        cfg["bulk"] = {"k_num": int(raw["bulk"].get("k_num", 401))}
    if exp == "oracle-check":
        oc = raw.get("oracle", {})
        cfg["oracle"] = {"seeds": int(oc.get("seeds", 10)),
                         "max_sites": int(oc.get("max_sites", 6))}
    return cfg


def _chain_defaults(chain):
    if "N" not in chain:
        raise ConfigError("chain requires field 'N'")
    out = {"N": int(chain["N"]), "T": float(chain.get("T", 1.0))}
    for key in ("JT", "DeltaT", "mu1T", "mu2T", "h2T"):
        val = chain.get(key, 0.0)
        if isinstance(val, list) and len(val) == 2 and all(
                isinstance(x, (int, float)) for x in val):
            out[key] = [float(val[0]), float(val[1])]
        elif isinstance(val, (int, float)):
            out[key] = float(val)
        else:
            raise ConfigError("chain.%s must be a number or [re, im] pair" % key)
    return out


def _spec_from_config(chain):
    def as_complex(v):
        return complex(v[0], v[1]) if isinstance(v, list) else complex(v)
    N, T = chain["N"], chain["T"]
    return ChainSpec(
        N=N, T=T,
        mu1=np.full(N, float(chain["mu1T"]) / T),
        mu2=np.full(N, float(chain["mu2T"]) / T),
        J=np.full(max(N - 1, 0), as_complex(chain["JT"]) / T),
        Delta=np.full(max(N - 1, 0), as_complex(chain["DeltaT"]) / T),
        h2_hopping=np.full(max(N - 1, 0), float(chain["h2T"]) / T),
    )


def _write_table(path, header, rows):
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(FMT % x if isinstance(x, float) else str(x)
                               for x in row) + "\n")


def _write_summary(path, items):
    with open(path, "w") as fh:
        for key, val in items:
            if isinstance(val, float):
                fh.write("%s = %s\n" % (key, FMT % val))
            else:
                fh.write("%s = %s\n" % (key, val))


def _build_schedule(cfg, spec):
    sc = cfg["schedule"]
    sched = canonical_schedule(spec, sc["periods_per_step"], f_set=sc["f_set"])
    if sc["deformations"]:
        sched = apply_deformation(sched, scale=sc["deformation_scale"])
    return sched


def _braid_rows(result):
    for rec in result.records:
        yield rec.period, rec.c_AA, rec.c_BB, rec.c_AB, rec.c_BA, rec.leakage


def _braid_summary(result):
    fin = result.final
    rep = result.report
    return [
        ("final_c_AA", fin.c_AA), ("final_c_BB", fin.c_BB),
        ("final_c_AB", fin.c_AB), ("final_c_BA", fin.c_BA),
        ("leakage_max", result.leakage_max),
        ("leakage_flagged", result.leakage_flagged),
        ("theta", rep.theta), ("overlap", rep.overlap),
        ("normalized_fidelity", rep.normalized_fidelity),
    ]


def _disorder_one(args):
    cfg, index = args
    spec = _spec_from_config(cfg["chain"])
    dis = DisorderSpec(master_seed=cfg["master_seed"], **cfg["disorder"])
    real = apply_disorder(spec, dis, index)
    sched = _build_schedule(cfg, spec)
    res = run_protocol(sched, real, record_every=max(cfg["record_every"], 100),
                       track_leakage=False)
    fin = res.final
    return index, (fin.c_AA, fin.c_BB, fin.c_AB, fin.c_BA, res.report.theta)


def run(config, output_dir=None, quiet=False) -> int:
    """Execute one experiment; returns the process exit status."""
    cfg = load_config(config)
    out = output_dir or cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    exp = cfg["experiment"]
    warn = []

    if exp == "dtc":
        spec = _spec_from_config(cfg["chain"])
        series = stroboscopic_z(spec, cfg["dtc"]["n_max"])
        ps = power_spectrum(series)
        _write_table(os.path.join(out, "z_series.tsv"), ["n", "Z"],
                     ((n, float(z)) for n, z in enumerate(series.values)))
        _write_table(os.path.join(out, "power_spectrum.tsv"),
                     ["omega_T", "magnitude_sq"],
                     zip(map(float, ps.omega_T), map(float, ps.magnitude_sq)))
        summary = [
            ("peak_omega_over_pi_T", ps.peak_omega_T() / np.pi),
            ("max_abs_z", float(np.abs(series.values).max())),
            ("z_std_abs", float(np.std(np.abs(series.values)))),
        ]

    elif exp == "spectrum-sweep":
        spec = _spec_from_config(cfg["chain"])
        sw = cfg["sweep"]
        grid = np.linspace(sw["start"], sw["stop"], sw["num"])
        table = spectrum_sweep(spec, sw["parameter"], grid)
        _write_table(os.path.join(out, "spectrum.tsv"),
                     ["grid_value", "phase", "edge_flag"],
                     ((float(g), float(p), int(f)) for g, p, f in table.rows()))
        summary = [
            ("parameter", sw["parameter"]),
            ("points_with_zero_flag", int((table.flags == 1).any(axis=1).sum())),
            ("points_with_pi_flag", int((table.flags == 2).any(axis=1).sum())),
        ]

    elif exp in ("braid", "braid-deformed"):
        spec = _spec_from_config(cfg["chain"])
        sched = _build_schedule(cfg, spec)
        res = run_protocol(sched, spec, record_every=cfg["record_every"])
        _write_table(os.path.join(out, "correlations.tsv"),
                     ["period", "c_AA", "c_BB", "c_AB", "c_BA", "leakage"],
                     _braid_rows(res))
        summary = _braid_summary(res)
        summary.append(("stage_boundaries", ",".join(
            str(x) for x in np.cumsum([st.duration_periods for st in sched.stages]))))
        if res.leakage_flagged:
            warn.append("leakage %.3g exceeded the abort threshold" % res.leakage_max)

    elif exp == "braid-disorder":
        n_real = cfg["disorder"]["realizations"]
        jobs = [(cfg, i) for i in range(n_real)]
        if cfg["threads"] > 1:
            with ProcessPoolExecutor(max_workers=cfg["threads"]) as pool:
                results = dict(pool.map(_disorder_one, jobs))
        else:
            results = dict(map(_disorder_one, jobs))
        rows = [(i,) + results[i] for i in sorted(results)]
        _write_table(os.path.join(out, "realizations.tsv"),
                     ["index", "c_AA", "c_BB", "c_AB", "c_BA", "theta"], rows)
        arr = np.array([r[1:5] for r in rows])
        mean = arr.mean(axis=0)
        std = arr.std(axis=0)
        summary = [
            ("realizations", n_real),
            ("mean_c_AA", float(mean[0])), ("mean_c_BB", float(mean[1])),
            ("mean_c_AB", float(mean[2])), ("mean_c_BA", float(mean[3])),
            ("std_c_AA", float(std[0])), ("std_c_BB", float(std[1])),
            ("std_c_AB", float(std[2])), ("std_c_BA", float(std[3])),
        ]

    elif exp == "multiwire":
        spec = _spec_from_config(cfg["chain"])
        wires = [spec] * cfg["multiwire"]["wires"]
        res = multiwire_protocol(wires, 0, cfg["multiwire"]["periods_per_step"])
        _write_table(os.path.join(out, "overlaps.tsv"), ["evolved", "against", "overlap"],
                     ((src, dst, float(v)) for (src, dst), v in sorted(res.overlaps.items())))
        summary = [
            ("ov_Al1_to_minus_Bl", -res.overlaps[("A_l1", "B_l")]),
            ("ov_Bl1_to_Al", res.overlaps[("B_l1", "A_l")]),
            ("ov_Al_to_Al1", res.overlaps[("A_l", "A_l1")]),
            ("ov_Bl_to_Bl1", res.overlaps[("B_l", "B_l1")]),
            ("leakage_max", res.leakage_max),
        ]

    elif exp == "oracle-check":
        summary = _oracle_check(cfg)

    elif exp == "bulk-bands":
        chain = cfg["chain"]
        J, Delta, mu1, mu2 = bulk_params_from_products(
            float(chain["JT"]), float(chain["DeltaT"]),
            float(chain["mu1T"]), float(chain["mu2T"]))
        ks = np.linspace(-np.pi, np.pi, cfg["bulk"]["k_num"])
        rows = []
        recon_dev = 0.0
        for k in ks:
            pt = bulk_angle(k, mu1, mu2, J, Delta)
            rows.append((float(k), pt.theta, float(np.pi - pt.theta), pt.h))
            if pt.m_hat is not None:
                dev = np.abs(reconstruct_propagator(pt)
                             - bulk_bloch_propagator(k, mu1, mu2, J, Delta)).max()
                recon_dev = max(recon_dev, float(dev))
        _write_table(os.path.join(out, "bands.tsv"),
                     ["k", "theta", "gap_to_pi", "h"], rows)
        gap0, gappi = bulk_gaps(mu1, mu2, J, Delta, ks)
        rng = np.random.Generator(np.random.Philox(key=np.array(
            [cfg.get("master_seed", 0), 1], np.uint64)))
        phs_max = 0.0
        for _ in range(20):
            k = rng.uniform(0.1, np.pi - 0.1)
            try:
                phs_max = max(phs_max, phs_residual(k, mu1, mu2, J, Delta))
            except ValueError:
                continue
        summary = [("gap_zero", gap0), ("gap_pi", gappi),
                   ("phs_residual_max", phs_max),
                   ("reconstruction_max_dev", recon_dev)]

    else:  # pragma: no cover
        raise ConfigError("unhandled experiment %r" % exp)

    _write_summary(os.path.join(out, "summary.txt"), summary)
    manifest = {"config": cfg, "package": "mtcsim %s" % __version__,
                "rng": "numpy Philox, key = [master_seed, stream-index]",
                "created": time.strftime("%Y-%m-%dT%H:%M:%S")}
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if not quiet:
        for key, val in summary:
            print("%s = %s" % (key, FMT % val if isinstance(val, float) else val))
        for w in warn:
            print("warning: %s" % w)
    return 0


def _oracle_check(cfg):
    """Run the full cross-check battery at small size; returns summary items."""
    max_sites = cfg["oracle"]["max_sites"]
    seeds = cfg["oracle"]["seeds"]
    T = cfg["chain"]["T"]
    sum_rule_max = 0.0
    rot_max = 0.0
    for seed in range(seeds):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 2], np.uint64)))
        N = int(rng.integers(2, max_sites + 1))
        spec = ChainSpec(
            N, T,
            rng.uniform(-2, 2, N) / T, rng.uniform(-2, 2, N) / T,
            rng.uniform(-2, 2, N - 1) / T + 0j, rng.uniform(-2, 2, N - 1) / T + 0j,
        )
        sum_rule_max = max(sum_rule_max, edoracle.free_fermion_sum_rule(spec))
        mb = edoracle.fermion_floquet(spec)
        gam = edoracle.fock_majoranas(N)
        r_mb = edoracle.extract_mode_rotation(mb, gam)
        r_sp = one_period_propagator(spec).R
        rot_max = max(rot_max, float(np.abs(r_mb - r_sp).max()))
    jw_max = 0.0
    for N in (2, 3, 4):
        j_ising, f = 0.7 / T, 0.45 / T
        spin = edoracle.ising_floquet(j_ising, f, N, T)
        ferm = edoracle.fermion_floquet(uniform_chain(
            N, -j_ising * T, -j_ising * T, 0.0, 2 * f * T, T=T))
        jw_max = max(jw_max, edoracle.match_phase_multisets(
            spin.eigenphases, ferm.eigenphases, align=True))
    chain = cfg["chain"]
    spec4 = _spec_from_config({**chain, "N": 4})
    sched = canonical_schedule(spec4, 100)
    half = StageSchedule(sched.stages[:3], sched.base)
    ov_half = edoracle.magic_state_check(spec4, half)
    ov_full = edoracle.magic_state_check(spec4, sched)
    return [
        ("sum_rule_max_dev", sum_rule_max),
        ("mode_rotation_max_dev", rot_max),
        ("spin_image_max_dev", jw_max),
        ("magic_overlap_half", ov_half),
        ("target_overlap_full", ov_full),
        ("all_pass", bool(sum_rule_max < 1e-10 and rot_max < 1e-10
                          and jw_max < 1e-10 and ov_half > 0.99 and ov_full > 0.99)),
    ]


def list_experiments():
    """Catalog of the available experiments."""
    lines = ["available experiments:"]
    for name, desc in EXPERIMENTS.items():
        lines.append("  %-16s %s" % (name, desc))
    return "\n".join(lines)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="mtcsim",
        description="Floquet Majorana wire simulator: config-driven experiments.")
    parser.add_argument("config", nargs="?", help="path to a JSON config file")
    parser.add_argument("--output-dir", default=None, help="override config output_dir")
    parser.add_argument("--seed", type=int, default=None, help="override master_seed")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes for ensemble experiments")
    parser.add_argument("--quiet", action="store_true")
    parser.add_argument("--list", action="store_true", help="list experiments and exit")
    args = parser.parse_args(argv)
    if args.list:
        print(list_experiments())
        return 0
    if not args.config:
        parser.error("a config path is required (or use --list)")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["master_seed"] = args.seed
        if args.threads is not None:
            cfg["threads"] = args.threads
        return run(cfg, output_dir=args.output_dir, quiet=args.quiet)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
