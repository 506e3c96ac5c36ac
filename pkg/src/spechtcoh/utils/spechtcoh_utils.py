import hashlib
import json
import logging
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional

import pandas as pd
import yaml
from dotenv import load_dotenv
from tqdm import tqdm

from spechtcoh import __version__
from spechtcoh.utils.arith import h0_criterion, l_p
from spechtcoh.utils.cache import SpechtcohCache, record_key
from spechtcoh.utils.cohomology import (
    Certificate,
    Provenance,
    cocycle_h1_dimension,
    h0_direct,
    h1_nonvanishing,
    require_odd,
    verify_certificate,
)
from spechtcoh.utils.combinatorics import (
    Partition,
    generate_partitions,
    hook_length_dimension,
    multinomial,
)
from spechtcoh.utils.constructions import FAMILIES, family_vector
from spechtcoh.utils.file_utils import write_json_atomic
from spechtcoh.utils.specht import specht_by_kernels, specht_standard_basis

DEFAULT_CONFIG = {
    "dimension_cap": 200000,
    "dense_cap": 6000,
    "oracle_max_d": 8,
    "cache_type": "directory",
    "cache_uri": "${SPECHTCOH_CACHE_DIR}",
    "scan_jobs": 1,
    "log_level": "INFO",
    "selftest_max_d": 5,
}

# keys that change computed results, and so namespace the cache
RESULT_KEYS = ("dimension_cap", "dense_cap", "oracle_max_d")

SCAN_COLUMNS = ["lambda", "p", "dim_M", "dim_S", "h0", "h1", "diagnostic_dim", "seconds"]


def replace_env_vars(value):
    """
    Recursively replace ${VAR} in strings with environment variables.
    If the env variable is not found, leave ${VAR} as-is.
    """
    pattern = re.compile(r"\$\{([^}]+)\}")

    def replacer(match):
        var_name = match.group(1)
        return os.environ.get(var_name, match.group(0))  # fallback to ${VAR}

    if isinstance(value, str):
        return pattern.sub(replacer, value)
    elif isinstance(value, dict):
        return {k: replace_env_vars(v) for k, v in value.items()}
    elif isinstance(value, list):
        return [replace_env_vars(v) for v in value]
    else:
        return value


def load_config(file_path="config.yaml"):
    """
    Load a YAML config file over the built-in defaults, replacing ${ENV_VAR}
    with actual env values. Leaves the placeholders if env vars are not set.
    Args:
        file_path (str): The path to the YAML configuration file. Defaults to "config.yaml".
    Returns:
        dict: The merged configuration.
    """

    # load environment variables from .env file if it exists
    load_dotenv()

    config = dict(DEFAULT_CONFIG)
    if file_path and os.path.exists(file_path):
        with open(file_path, "r") as file:
            raw_config = yaml.safe_load(file) or {}
        config.update(raw_config)
    else:
        logging.warning(f"Config file {file_path} not found, using defaults.")

    return replace_env_vars(config)


def config_hash(config):
    """md5 over the result-relevant configuration and the package version."""
    relevant = {key: config.get(key, DEFAULT_CONFIG[key]) for key in RESULT_KEYS}
    relevant["version"] = __version__
    return hashlib.md5(json.dumps(relevant, sort_keys=True).encode()).hexdigest()


def save_certificate(certificate: Certificate, file_path):
    write_json_atomic(certificate.to_record(), file_path)
    logging.info(f"Certificate written to {file_path}")


def load_certificate(file_path) -> Certificate:
    """
    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the file is not a valid certificate.
    """
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"The certificate file {file_path} does not exist.")
    with open(file_path, "r") as file:
        try:
            record = json.load(file)
        except json.JSONDecodeError as e:
            raise ValueError(f"Certificate file {file_path} is not valid JSON: {e}")
    return Certificate.from_record(record)


def certificate_digest(record: Optional[dict]) -> Optional[str]:
    if record is None:
        return None
    return hashlib.md5(json.dumps(record, sort_keys=True).encode()).hexdigest()


def family_certificate(name, p=3, a=1, b=2, cap=DEFAULT_CONFIG["dimension_cap"]) -> Certificate:
    partition, u = family_vector(name, p, a, b, cap)
    return verify_certificate(partition, u.p, u, Provenance.for_family(name, p, a, b), cap)


def within_caps(partition: Partition, config) -> bool:
    n = multinomial(partition.parts)
    return n <= config["dimension_cap"] and n <= config["dense_cap"]


def analyze_partition(parts, p, dimension_cap, dense_cap):
    """Full H^0/H^1 record for one partition. Runs inside scan workers."""
    start = time.perf_counter()
    partition = Partition(tuple(parts))
    decision = h1_nonvanishing(partition, p, dimension_cap, dense_cap)
    certificate = decision.certificate.to_record() if decision.certificate else None
    return {
        "p": p,
        "lambda": list(partition.parts),
        "dim_M": decision.ambient_dim,
        "dim_S": hook_length_dimension(partition),
        "h0": decision.h0,
        "h1": decision.nonvanishing,
        "diagnostic_dim": decision.diagnostic_dim,
        "certificate": certificate,
        "seconds": round(time.perf_counter() - start, 6),
    }


@dataclass
class ScanResult:
    d: int
    p: int
    records: List[dict]
    skipped: List[str] = field(default_factory=list)
    config_hash: str = ""

    def to_dict(self, include_meta=True):
        output = {
            "d": self.d,
            "p": self.p,
            "records": [
                {
                    "lambda": record["lambda"],
                    "dim_M": record["dim_M"],
                    "dim_S": record["dim_S"],
                    "h0": record["h0"],
                    "h1": record["h1"],
                    "diagnostic_dim": record["diagnostic_dim"],
                    "certificate": certificate_digest(record["certificate"]),
                }
                for record in self.records
            ],
            "skipped": list(self.skipped),
        }
        if include_meta:
            output["meta"] = {
                "generated": datetime.now(timezone.utc).isoformat(),
                "version": __version__,
                "config_hash": self.config_hash,
                "seconds": {
                    str(Partition(tuple(r["lambda"]))): r["seconds"] for r in self.records
                },
            }
        return output

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "lambda": str(Partition(tuple(r["lambda"]))),
                "p": r["p"],
                "dim_M": r["dim_M"],
                "dim_S": r["dim_S"],
                "h0": r["h0"],
                "h1": r["h1"],
                "diagnostic_dim": r["diagnostic_dim"],
                "seconds": r["seconds"],
            }
            for r in self.records
        ]
        return pd.DataFrame(rows, columns=SCAN_COLUMNS)

    def render(self, fmt="json", include_meta=True) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(include_meta), indent=2)
        frame = self.to_frame()
        if fmt == "csv":
            return frame.to_csv(index=False)
        if fmt == "text":
            if frame.empty:
                return "(no partitions within the caps)"
            return frame.to_string(index=False)
        raise ValueError(f"Unknown output format '{fmt}'.")


def run_scan(d, p, config, jobs=1, cache: Optional[SpechtcohCache] = None, progress=True):
    """
    Decide H^0 and H^1 for every partition of d. Partitions beyond the caps
    are skipped; cached records are reused; new records are computed in up
    to ``jobs`` worker processes and written back to the cache from this
    process only. Records come back in reverse lexicographic order of lambda.
    """
    require_odd(p, "A scan")
    chash = config_hash(config)
    partitions = generate_partitions(d)
    found: Dict[tuple, dict] = {}
    skipped = []
    todo = []
    for partition in partitions:
        if not within_caps(partition, config):
            logging.warning(
                f"Skipping {partition}: dim M = {multinomial(partition.parts)} exceeds the caps"
            )
            skipped.append(str(partition))
            continue
        if cache is not None:
            record = cache.get_record(record_key(chash, p, partition.parts))
            if record is not None:
                logging.info(f"Cache hit for {partition}, p={p}")
                found[partition.parts] = record
                continue
        todo.append(partition)

    def _store(record):
        parts = tuple(record["lambda"])
        record["key"] = record_key(chash, p, parts)
        record["config_hash"] = chash
        found[parts] = record
        if cache is not None:
            cache.upsert_record(record)

    args = (p, config["dimension_cap"], config["dense_cap"])
    bar = tqdm(total=len(todo), desc=f"d={d}, p={p}", disable=not progress)
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(analyze_partition, part.parts, *args) for part in todo]
            for future in as_completed(futures):
                _store(future.result())
                bar.update()
    else:
        for partition in todo:
            _store(analyze_partition(partition.parts, *args))
            bar.update()
    bar.close()

    records = [found[part.parts] for part in partitions if part.parts in found]
    return ScanResult(d, p, records, skipped, chash)


@dataclass
class SelftestResult:
    name: str
    passed: bool
    detail: str = ""


def run_selftest(max_d=5, oracle_max_d=7, primes=(3, 5), config=None, progress=True):
    """
    Oracle agreement checks: kernel intersection against polytabloids,
    the H^0 congruence against direct computation, the H^1 decision against
    the cocycle oracle, and the certificate families.
    """
    config = config or DEFAULT_CONFIG
    cap = config["dimension_cap"]
    results = []
    cases = [
        (partition, p)
        for d in range(1, max_d + 1)
        for partition in generate_partitions(d)
        for p in primes
    ]

    for partition, p in tqdm(cases, desc="kernels vs polytabloids", disable=not progress):
        by_kernels = specht_by_kernels(partition, p, cap).subspace
        standard = specht_standard_basis(partition, p, cap)
        hook = hook_length_dimension(partition)
        ok = by_kernels == standard and standard.dim == hook
        detail = f"dim {standard.dim}, hook {hook}"
        results.append(SelftestResult(f"specht {partition} p={p}", ok, detail))

    for partition, p in tqdm(cases, desc="H^0 criterion", disable=not progress):
        criterion = h0_criterion(partition.parts, p)
        direct = h0_direct(partition, p, cap)
        detail = f"criterion={criterion}, direct={direct}"
        results.append(SelftestResult(f"h0 {partition} p={p}", criterion == direct, detail))

    oracle_cases = [(partition, p) for partition, p in cases if partition.d <= oracle_max_d]
    for partition, p in tqdm(oracle_cases, desc="H^1 vs cocycles", disable=not progress):
        decision = h1_nonvanishing(partition, p, cap, config["dense_cap"])
        cocycles = cocycle_h1_dimension(partition, p, config["oracle_max_d"], cap)
        ok = decision.nonvanishing == (cocycles > 0)
        detail = f"decision={decision.nonvanishing}, cocycles={cocycles}"
        results.append(SelftestResult(f"h1 {partition} p={p}", ok, detail))

    for name in FAMILIES:
        certificate = family_certificate(name, 3, 1, 2, cap)
        results.append(SelftestResult(f"family {name}", certificate.verified, certificate.failure or ""))

    failed = [r for r in results if not r.passed]
    logging.info(f"Selftest: {len(results) - len(failed)}/{len(results)} checks passed")
    return results


def twist_comparison(partition: Partition, p, config):
    """H^1 decisions for p.lambda and p^2.lambda, when both fit the caps."""
    require_odd(p, "The twist comparison")
    rows = []
    for factor in (p, p * p):
        scaled = partition.scaled(factor)
        if not within_caps(scaled, config):
            logging.warning(f"{scaled} exceeds the caps; not decided")
            rows.append((scaled, None))
            continue
        rows.append((scaled, h1_nonvanishing(scaled, p, config["dimension_cap"], config["dense_cap"])))
    return rows


def stability_comparison(partition: Partition, p, a, config):
    """
    Compare H^0 and the H^1 decision for lambda and (a, lambda_1, lambda_2, ...),
    where a = -1 mod p^{l_p(lambda_1)} and a >= lambda_1.
    """
    require_odd(p, "The stability comparison")
    modulus = p ** l_p(partition[0], p)
    if (a + 1) % modulus != 0:
        raise ValueError(f"a={a} is not congruent to -1 modulo {modulus}.")
    if a < partition[0]:
        raise ValueError(f"a={a} is smaller than the first part {partition[0]}.")
    extended = Partition((a,) + partition.parts)
    rows = []
    for shape in (partition, extended):
        h0 = h0_direct(shape, p, config["dimension_cap"])
        decision = None
        if within_caps(shape, config):
            decision = h1_nonvanishing(shape, p, config["dimension_cap"], config["dense_cap"])
        else:
            logging.warning(f"{shape} exceeds the caps; H^1 not decided")
        rows.append((shape, h0, decision))
    return rows
