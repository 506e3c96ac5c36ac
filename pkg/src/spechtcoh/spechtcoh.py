#!/usr/bin/env python3
import argparse
import logging
import sys

import click

from spechtcoh.utils import spechtcoh_utils
from spechtcoh.utils.arith import h0_criterion
from spechtcoh.utils.cache import SpechtcohCache
from spechtcoh.utils.cohomology import (
    cocycle_h1_dimension,
    extension_module,
    h0_direct,
    h1_nonvanishing,
    verify_certificate,
)
from spechtcoh.utils.combinatorics import Partition, render_tabloid, tabloid_basis
from spechtcoh.utils.constructions import FAMILIES, FAMILY_HAND_33
from spechtcoh.utils.errors import DimensionCapError

logging.basicConfig(level=logging.INFO)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3

# terms of u listed before the rest is summarized
SUPPORT_PREVIEW = 24


def arg_parser():
    parser = argparse.ArgumentParser(
        description="spechtcoh CLI (cohomology of Specht modules in odd characteristic)"
    )
    subparsers = parser.add_subparsers(dest="command")

    # config command
    parser.add_argument(
        "-c",
        "--config",
        default="config.yaml",
        help="path to config file, default: config.yaml in current directory",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    # h0 command
    h0_parser = subparsers.add_parser(
        "h0", help="decide H^0 by the congruence criterion and by direct computation"
    )
    h0_parser.add_argument("--p", type=int, required=True, help="the characteristic")
    h0_parser.add_argument("--lambda", dest="partition", required=True, help="partition, e.g. 8,3")

    # h1 command
    h1_parser = subparsers.add_parser("h1", help="decide whether H^1 is nonzero")
    h1_parser.add_argument("--p", type=int, required=True, help="the characteristic (odd)")
    h1_parser.add_argument("--lambda", dest="partition", required=True, help="partition, e.g. 3,3")
    h1_parser.add_argument(
        "--certificate-out", default=None, help="write the certificate JSON to this path"
    )
    h1_parser.add_argument(
        "--oracle", action="store_true", help="also run the cocycle oracle (small d only)"
    )

    # verify command
    verify_parser = subparsers.add_parser(
        "verify", help="verify a certificate file or a built-in certificate family"
    )
    source = verify_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--certificate", default=None, help="path to a certificate JSON file")
    source.add_argument("--family", choices=FAMILIES, default=None, help="built-in family")
    verify_parser.add_argument("--p", type=int, default=None, help="the characteristic (odd)")
    verify_parser.add_argument("--a", type=int, default=1, help="family exponent a (default: 1)")
    verify_parser.add_argument("--b", type=int, default=2, help="family exponent b (default: 2)")
    verify_parser.add_argument(
        "--lambda", dest="partition", default=None, help="expected partition (optional check)"
    )

    # scan command
    scan_parser = subparsers.add_parser("scan", help="decide H^0 and H^1 for all partitions of d")
    scan_parser.add_argument("--d", type=int, required=True, help="degree d")
    scan_parser.add_argument("--p", type=int, required=True, help="the characteristic (odd)")
    scan_parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    scan_parser.add_argument("--cache", default=None, help="cache location (overrides config)")
    scan_parser.add_argument(
        "--format", choices=["json", "csv", "text"], default="json", help="output format"
    )
    scan_parser.add_argument(
        "--no-meta", action="store_true", help="omit timestamps and timings from JSON"
    )
    scan_parser.add_argument("--quiet", action="store_true", help="no progress bar")

    # selftest command
    selftest_parser = subparsers.add_parser("selftest", help="run the oracle agreement suite")
    selftest_parser.add_argument("--max-d", type=int, default=None, help="largest degree to test")
    selftest_parser.add_argument("--quiet", action="store_true", help="no progress bar")

    # twist command
    twist_parser = subparsers.add_parser(
        "twist", help="decide H^1 for p*lambda and p^2*lambda side by side"
    )
    twist_parser.add_argument("--p", type=int, required=True, help="the characteristic (odd)")
    twist_parser.add_argument("--lambda", dest="partition", required=True, help="partition")

    # stability command
    stability_parser = subparsers.add_parser(
        "stability", help="compare lambda with (a, lambda_1, lambda_2, ...)"
    )
    stability_parser.add_argument("--p", type=int, required=True, help="the characteristic (odd)")
    stability_parser.add_argument("--lambda", dest="partition", required=True, help="partition")
    stability_parser.add_argument("--a", type=int, required=True, help="new first part")

    # cache command
    cache_parser = subparsers.add_parser("cache", help="inspect or clear the result cache")
    cache_parser.add_argument("action", choices=["list", "clear"])
    cache_parser.add_argument("--cache", default=None, help="cache location (overrides config)")
    cache_parser.add_argument("-y", "--yes", action="store_true", help="do not ask for confirmation")

    return parser


def _yes_no(flag):
    return "nonzero" if flag else "zero"


def cmd_h0(args, config):
    partition = Partition.parse(args.partition)
    criterion = h0_criterion(partition.parts, args.p)
    direct = h0_direct(partition, args.p, config["dimension_cap"])
    print(f"H^0(S_{partition.d}, S^{partition}) over GF({args.p})")
    print(f"  congruence criterion: {_yes_no(criterion)}")
    print(f"  direct computation:   {_yes_no(direct)}")
    if criterion != direct:
        logging.error("Criterion and direct computation disagree.")
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_h1(args, config):
    partition = Partition.parse(args.partition)
    try:
        decision = h1_nonvanishing(partition, args.p, config["dimension_cap"], config["dense_cap"])
    except DimensionCapError as e:
        if e.cap != config["dense_cap"]:
            raise
        raise DimensionCapError(
            f"{e} `verify` still checks certificates for M^{partition} up to "
            f"dimension_cap = {config['dimension_cap']}.",
            required=e.required,
            cap=e.cap,
        ) from e
    print(f"H^1(S_{partition.d}, S^{partition}) over GF({args.p}): {_yes_no(decision.nonvanishing)}")
    print(f"  dim M = {decision.ambient_dim}, dim S = {decision.dim_specht}, dim W = {decision.dim_w}")
    print(f"  H^0 nonzero: {decision.h0}")
    print(f"  diagnostic dim W/(S + f) = {decision.diagnostic_dim} (conjectural, not claimed to be dim H^1)")
    if args.oracle:
        if partition.d <= config["oracle_max_d"]:
            cocycles = cocycle_h1_dimension(
                partition, args.p, config["oracle_max_d"], config["dimension_cap"]
            )
            print(f"  cocycle oracle: dim H^1 = {cocycles}")
        else:
            logging.warning(
                f"d = {partition.d} exceeds oracle_max_d = {config['oracle_max_d']}; oracle skipped"
            )
    if decision.certificate is not None:
        _print_support(decision.certificate, config["dimension_cap"])
        if args.certificate_out:
            spechtcoh_utils.save_certificate(decision.certificate, args.certificate_out)
    elif args.certificate_out:
        logging.warning("H^1 vanishes; no certificate written.")
    return EXIT_OK


def _print_certificate(certificate):
    print(
        f"Certificate for {certificate.partition} over GF({certificate.p}) "
        f"({certificate.provenance.value})"
    )
    for (i, v), c in sorted(certificate.multiples.items()):
        value = "not a multiple of f" if c is None else f"{c} * f"
        print(f"  psi_({i},{v})(u) = {value}")
    print(f"  condition (1): {'ok' if certificate.condition1_ok else 'FAILED'}")
    implied = " (implied by (1))" if certificate.condition2_implied and certificate.condition1_ok else ""
    print(f"  condition (2): {'ok' if certificate.condition2_ok else 'FAILED'}{implied}")
    if certificate.failure:
        print(f"  failure: {certificate.failure}")


def _print_support(certificate, cap):
    """List u in bar notation, one signed coefficient and tabloid per line."""
    basis = tabloid_basis(certificate.partition, cap)
    p = certificate.p
    terms = certificate.u.terms()
    print(f"  u has {len(terms)} nonzero coordinates:")
    for rank, coeff in terms[:SUPPORT_PREVIEW]:
        signed = coeff - p if coeff > p // 2 else coeff
        print(f"    {signed:+d} {render_tabloid(basis.unrank(rank))}")
    if len(terms) > SUPPORT_PREVIEW:
        print(f"    ... and {len(terms) - SUPPORT_PREVIEW} more")


def cmd_verify(args, config):
    cap = config["dimension_cap"]
    if args.family:
        if args.family == FAMILY_HAND_33 and args.p not in (None, 3):
            raise ValueError(f"The {FAMILY_HAND_33} family lives over GF(3).")
        p = args.p if args.p is not None else 3
        certificate = spechtcoh_utils.family_certificate(args.family, p, args.a, args.b, cap)
    else:
        stored = spechtcoh_utils.load_certificate(args.certificate)
        if args.p is not None and args.p != stored.p:
            raise ValueError(f"Certificate is over GF({stored.p}), not GF({args.p}).")
        certificate = verify_certificate(stored.partition, stored.p, stored.u, stored.provenance, cap)
    if args.partition and Partition.parse(args.partition) != certificate.partition:
        raise ValueError(f"Certificate is for {certificate.partition}, not {args.partition}.")

    _print_certificate(certificate)
    _print_support(certificate, cap)
    if not certificate.verified:
        logging.error(f"Verification failed: {certificate.failure}")
        return EXIT_VERIFICATION
    try:
        module = extension_module(certificate, cap, config["dense_cap"])
    except RuntimeError as e:
        logging.error(f"Extension module check failed: {str(e)}")
        return EXIT_VERIFICATION
    print(
        f"  extension module: closed under all Coxeter generators, dim {module.dim} "
        f"in a {module.ambient_dim}-dimensional M"
    )
    return EXIT_OK


def _open_cache(args, config, create=True):
    uri = args.cache or config.get("cache_uri")
    try:
        return SpechtcohCache(config.get("cache_type", "directory"), uri, create=create)
    except ValueError as e:
        if args.cache:
            raise
        logging.info(f"Result cache disabled: {str(e)}")
        return None


def cmd_scan(args, config):
    jobs = args.jobs or config.get("scan_jobs", 1)
    cache = _open_cache(args, config)
    progress = not args.quiet and sys.stderr.isatty()
    result = spechtcoh_utils.run_scan(args.d, args.p, config, jobs, cache, progress)
    print(result.render(args.format, include_meta=not args.no_meta))
    return EXIT_OK


def cmd_selftest(args, config):
    max_d = args.max_d or config.get("selftest_max_d", 5)
    progress = not args.quiet and sys.stderr.isatty()
    results = spechtcoh_utils.run_selftest(
        max_d, min(7, config["oracle_max_d"]), config=config, progress=progress
    )
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAIL {r.name}: {r.detail}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFICATION if failed else EXIT_OK


def cmd_twist(args, config):
    partition = Partition.parse(args.partition)
    for scaled, decision in spechtcoh_utils.twist_comparison(partition, args.p, config):
        answer = "beyond caps" if decision is None else _yes_no(decision.nonvanishing)
        print(f"H^1(S_{scaled.d}, S^{scaled}) over GF({args.p}): {answer}")
    return EXIT_OK


def cmd_stability(args, config):
    partition = Partition.parse(args.partition)
    for shape, h0, decision in spechtcoh_utils.stability_comparison(partition, args.p, args.a, config):
        h1 = "beyond caps" if decision is None else _yes_no(decision.nonvanishing)
        print(f"{shape}: H^0 {_yes_no(h0)}, H^1 {h1}")
    return EXIT_OK


def cmd_cache(args, config):
    cache = _open_cache(args, config, create=False)
    if cache is None:
        logging.error("No cache location configured; set SPECHTCOH_CACHE_DIR or pass --cache.")
        return EXIT_USAGE
    records = cache.get_all_records()
    if args.action == "list":
        for record in records:
            print(f"{record['key']}: h0={record['h0']}, h1={record['h1']}")
        print(f"{len(records)} cached records")
        return EXIT_OK
    if not records:
        logging.info("Cache is already empty.")
        return EXIT_OK
    if not args.yes and not click.confirm(
        f"Are you sure you want to delete {len(records)} cached records?", default=False
    ):
        logging.info("Cache not cleared.")
        return EXIT_OK
    cache.truncate_cache()
    logging.info(f"Removed {len(records)} cached records.")
    return EXIT_OK


COMMANDS = {
    "h0": cmd_h0,
    "h1": cmd_h1,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
    "twist": cmd_twist,
    "stability": cmd_stability,
    "cache": cmd_cache,
}


def main(argv=None):
    parser = arg_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_USAGE)

    config = spechtcoh_utils.load_config(args.config)
    level = logging.DEBUG if args.verbose else config.get("log_level", "INFO")
    logging.getLogger().setLevel(level)

    try:
        code = COMMANDS[args.command](args, config)
    except DimensionCapError as e:
        logging.error(f"{args.command} failed: {str(e)}")
        code = EXIT_CAP
    except (ValueError, FileNotFoundError) as e:
        logging.error(f"{args.command} failed: {str(e)}")
        code = EXIT_USAGE
    except RuntimeError as e:
        logging.error(f"{args.command} failed: {str(e)}")
        code = EXIT_VERIFICATION
    sys.exit(code)


if __name__ == "__main__":
    main()
