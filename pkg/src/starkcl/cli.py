"""Command-line front end: ``starkcl <command> ...``.

Exit codes: 0 ok, 2 input/domain error, 3 mathematical refusal,
4 precision exhaustion.  Every JSON report embeds the RunConfig.
"""

import argparse
import json
import sys

from . import coleman, qwalk, sigma, stark
from .cache import CacheStore, NullCache, dumps
from .classgroup import ClassGroup, class_group
from .config import RunConfig
from .errors import StarkCLError
from .lfunction import fit_series, quadratic_character, series_from_record, series_to_record
from .quadfield import make_field


def _config(args):
    keys = ("precision", "degree", "norm_bound", "epsilon", "hash", "seed", "format",
            "cache_dir", "no_cache")
    cli = {k: getattr(args, k, None) for k in keys}
    if not cli["no_cache"]:
        cli["no_cache"] = None
    return RunConfig.from_sources(cli)


def _store(cfg):
    return NullCache() if cfg.no_cache else CacheStore(cfg.cache_dir)


def _group(K, cfg, mode="enumerate"):
    """Class group through the cache; returns (ClassGroup, cache_hit)."""
    store = _store(cfg)
    key = f"{K.delta}"
    rec = store.get("classgroup", key)
    if rec is not None:
        return ClassGroup.from_record(rec), True
    G = class_group(K, mode)
    store.put("classgroup", key, G.to_record())
    return G, False


def _series(K, p, cfg):
    store = _store(cfg)
    M = cfg.degree
    key = f"{K.delta}_{p}_{cfg.precision}_{M if M is not None else 'N'}"
    rec = store.get("lseries", key)
    if rec is not None:
        return series_from_record(rec), True
    s = fit_series(quadratic_character(K), p, M, cfg.precision)
    store.put("lseries", key, series_to_record(s))
    return s, False


def _emit(payload, cfg, out=None):
    out = out or sys.stdout
    if cfg.format == "table" and isinstance(payload, dict):
        for k in sorted(payload):
            if k != "config":
                out.write(f"{k:>28}  {json.dumps(payload[k], sort_keys=True)}\n")
        return
    out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


# -- commands -------------------------------------------------------------------

def cmd_classgroup(args, cfg):
    K = make_field(args.D)
    G, hit = _group(K, cfg, args.mode)
    rec = G.to_record()
    rec.update(D=args.D, mode=args.mode, cache_hit=hit, config=cfg.to_dict())
    _emit(rec, cfg)


def _invariant_payload(D, p, cfg):
    K = make_field(D)
    G, _ = _group(K, cfg)
    out = {"D": D, "delta": K.delta, "p": p, "h": G.h, "divisors": list(G.divisors)}
    series, hit = _series(K, p, cfg)
    out["lseries"] = series.to_json()
    out["lseries_cache_hit"] = hit
    su = stark.stark_unit(K, p, cfg.precision, cfg.degree, series)
    out["stark_unit"] = su.to_json()
    for mode in stark.MODES:
        inv = stark.kappa(K, p, mode, cfg.precision, cfg.degree, group=G, series=series)
        out[mode] = inv.to_json()
    return out


def cmd_invariant(args, cfg):
    out = _invariant_payload(args.D, args.p, cfg)
    out["config"] = cfg.to_dict()
    _emit(out, cfg)


def cmd_compare(args, cfg):
    if args.sweep:
        rep = stark.compare_sweep(args.sweep, cfg.precision, cfg.degree)
    else:
        if args.D1 is None or args.D2 is None:
            raise SystemExit("compare needs D1 D2 or --sweep LIMIT")
        rep = stark.compare(args.D1, args.D2, cfg.precision, cfg.degree)
    rep["config"] = cfg.to_dict()
    _emit(rep, cfg)


def _walk_Ds(args):
    if args.sweep:
        return stark.fundamental_radicands(args.sweep)
    return args.D


def cmd_walk(args, cfg):
    Ds = _walk_Ds(args)
    if not Ds:
        raise SystemExit("walk needs D or --sweep LIMIT")
    if cfg.format == "csv" or len(Ds) > 1:
        rows, _ = qwalk.lower_bound_table(Ds, cfg.norm_bound, cfg.epsilon)
        if cfg.format == "csv":
            sys.stdout.write(qwalk.format_csv(rows))
        else:
            _emit({"rows": rows, "config": cfg.to_dict()}, cfg)
        return
    D = Ds[0]
    K = make_field(D, compute_unit=False)
    G, _ = _group(K, cfg)
    Gr = qwalk.build_cayley(K, cfg.norm_bound, G)
    rep = qwalk.spectral_gap(Gr, cfg.epsilon, D=D)
    out = rep.to_json()
    out["config"] = cfg.to_dict()
    _emit(out, cfg)


def cmd_lowerbound(args, cfg):
    Ds = _walk_Ds(args)
    if not Ds:
        raise SystemExit("lowerbound needs D values or --sweep LIMIT")
    rows, _ = qwalk.lower_bound_table(Ds, cfg.norm_bound, cfg.epsilon)
    if cfg.format == "json":
        _emit({"rows": rows, "config": cfg.to_dict(),
               "note": "desk-scale anchors; the D > 10^32 regime is extrapolation only"}, cfg)
    else:
        sys.stdout.write(qwalk.format_csv(rows))


def cmd_coleman(args, cfg):
    K = make_field(args.D)
    G, _ = _group(K, cfg)
    table, rep = coleman.psi_embed(K, args.p, None, cfg.precision, cfg.degree, G)
    out = {"D": args.D, "kernel": rep.to_json(),
           "psi": [table[c].to_json() for c in G.elements()], "config": cfg.to_dict()}
    try:
        avg = coleman.class_average(coleman.default_differential(args.p, cfg.precision),
                                    K, args.p, cfg.precision, cfg.degree, G)
        out["class_average"] = avg.to_json()
    except StarkCLError as e:
        out["class_average"] = {"error": type(e).__name__, "message": str(e)}
    _emit(out, cfg)


def _read_hex_or_file(value):
    try:
        return bytes.fromhex(value)
    except ValueError:
        with open(value, "rb") as fh:
            return fh.read()


def cmd_crypto(args, cfg):
    seed = cfg.seed
    if args.action == "keygen":
        kp = sigma.keygen(args.D, seed, cfg.hash)
        blob = sigma.dump_keypair(kp)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(blob)
        _emit({
            "D": kp.D,
            "g": list(kp.g.canon.astuple()),
            "order_g": kp.order_g,
            "pk": list(kp.pk.canon.astuple()),
            "pk_serialized": sigma.serialize(kp.pk).hex(),
            "key_hex": blob.hex(),
            "hash": cfg.hash,
            "desk_scale": "discriminant far below 10^32; toy parameters",
            "config": cfg.to_dict(),
        }, cfg)
    elif args.action == "encrypt":
        kp = sigma.load_keypair(_read_hex_or_file(args.key))
        m = bytes.fromhex(args.message)
        ct = sigma.encrypt(kp.public(), m, seed, len(m) * 8 if args.k is None else args.k, cfg.hash)
        blob = sigma.dump_ciphertext(ct)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(blob)
        _emit({"c1": list(ct.c1.canon.astuple()), "c2": ct.c2.hex(),
               "ciphertext_hex": blob.hex(), "config": cfg.to_dict()}, cfg)
    else:
        kp = sigma.load_keypair(_read_hex_or_file(args.key))
        ct = sigma.load_ciphertext(_read_hex_or_file(args.ct))
        m = sigma.decrypt(kp, ct, cfg.hash)
        _emit({"message": m.hex(), "config": cfg.to_dict()}, cfg)


# -- parser -------------------------------------------------------------------------

def _common(p):
    p.add_argument("--precision", type=int, help="p-adic digits N (default 32)")
    p.add_argument("--degree", type=int, help="L-fit degree M (default N)")
    p.add_argument("--norm-bound", dest="norm_bound", type=int,
                   help="Cayley generator norm bound B (default ceil(log^3 Delta))")
    p.add_argument("--epsilon", type=float, help="epsilon in the gap bound (default 0.1)")
    p.add_argument("--hash", help="hash algorithm for the protocol (default sha256)")
    p.add_argument("--seed", type=int, help="deterministic RNG seed")
    p.add_argument("--format", choices=("json", "csv", "table"))
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("--no-cache", dest="no_cache", action="store_true", default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="starkcl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", help="class group structure of Q(sqrt D)")
    p.add_argument("D", type=int)
    p.add_argument("--mode", choices=("enumerate", "bsgs"), default="enumerate")
    _common(p)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("invariant", help="Stark unit and kappa_p for one field")
    p.add_argument("D", type=int)
    p.add_argument("p", type=int)
    _common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("compare", help="isomorphism comparator")
    p.add_argument("D1", type=int, nargs="?")
    p.add_argument("D2", type=int, nargs="?")
    p.add_argument("--sweep", type=int, metavar="LIMIT")
    _common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("walk", help="Cayley-graph spectrum")
    p.add_argument("D", type=int, nargs="*")
    p.add_argument("--sweep", type=int, metavar="LIMIT")
    _common(p)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("lowerbound", help="query lower-bound table (CSV)")
    p.add_argument("D", type=int, nargs="*")
    p.add_argument("--sweep", type=int, metavar="LIMIT")
    _common(p)
    p.set_defaults(func=cmd_lowerbound, format_default="csv")

    p = sub.add_parser("coleman", help="Coleman-model table and kernel report")
    p.add_argument("D", type=int)
    p.add_argument("p", type=int)
    _common(p)
    p.set_defaults(func=cmd_coleman)

    p = sub.add_parser("crypto", help="class-group ElGamal")
    p.add_argument("action", choices=("keygen", "encrypt", "decrypt"))
    p.add_argument("D", type=int, nargs="?")
    p.add_argument("--key", help="key file or hex")
    p.add_argument("--ct", help="ciphertext file or hex")
    p.add_argument("--message", help="message as hex")
    p.add_argument("--k", type=int, help="message length in bits (default: from message)")
    p.add_argument("--out", help="write the binary key/ciphertext here")
    _common(p)
    p.set_defaults(func=cmd_crypto)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "format_default", None) and args.format is None:
        args.format = args.format_default
    cfg = _config(args)
    try:
        args.func(args, cfg)
    except StarkCLError as e:
        sys.stderr.write(dumps({"error": type(e).__name__, "message": str(e),
                                "exit_code": e.exit_code}) + "\n")
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
