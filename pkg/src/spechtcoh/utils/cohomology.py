"""
H^0 and H^1 of Specht modules with trivial coefficients.

A vector u in M^lambda certifies H^1(S_d, S^lambda) != 0 (p odd) when

  (1) every psi_{i,v}(u) is a multiple c_{i,v} f_nu, not all c_{i,v} zero, and
  (2) there is no a != 0 with psi_{i,v}(a f_lambda - u) = 0 for all (i, v).

span(S^lambda, u) is then a nonsplit extension of S^lambda by the trivial
module.

The decision works with W = {u : every psi_{i,v}(u) lies in span(f_nu)}.
W contains S^lambda + span(f_lambda), and a certificate exists iff the
containment is strict:

* If u is in W but not in S^lambda + span(f_lambda), then (1) holds (all
  multiples zero would put u in S^lambda) and (2) holds (a f_lambda - u in
  S^lambda would put u in S^lambda + span(f_lambda)).
* If f_lambda is in S^lambda, a certificate satisfies (1) and lies outside
  S^lambda = S^lambda + span(f_lambda). If f_lambda is not in S^lambda, (2)
  says exactly that u is outside S^lambda + span(f_lambda).

dim W - dim(S^lambda + span(f_lambda)) is reported as a diagnostic only; it
is not known to equal dim H^1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from spechtcoh.utils.combinatorics import (
    DEFAULT_DIMENSION_CAP,
    Composition,
    Partition,
    coxeter_generators,
    hook_length_dimension,
    multinomial,
    tabloid_basis,
)
from spechtcoh.utils.constructions import FAMILY_BALANCED, FAMILY_FIRST_ROW, FAMILY_HAND_33
from spechtcoh.utils.errors import CharacteristicError, DimensionCapError
from spechtcoh.utils.linalg import (
    DEFAULT_DENSE_CAP,
    GFpSubspace,
    GFpVector,
    RowSpaceBuilder,
    check_dense_cap,
    contains,
    solve_affine,
    span,
    subspace_sum,
)
from spechtcoh.utils.specht import (
    act_vector,
    f_image_scalar,
    f_lambda,
    in_specht,
    iter_psi_maps,
    psi_family,
    psi_indices,
    specht_standard_basis,
)

DEFAULT_ORACLE_MAX_D = 8

Multiples = Dict[Tuple[int, int], Optional[int]]


class Provenance(str, Enum):
    SEARCHED = "searched"
    HAND_33 = "eq-4.1"
    FIRST_ROW_83 = "eq-4.2"
    BALANCED = "papa-family"
    FIRST_ROW = "thm-5.11-family"
    USER_SUPPLIED = "user-supplied"

    @classmethod
    def for_family(cls, name: str, p: int = 3, a: int = 1, b: int = 2) -> "Provenance":
        if name == FAMILY_HAND_33:
            return cls.HAND_33
        if name == FAMILY_BALANCED:
            return cls.BALANCED
        if name == FAMILY_FIRST_ROW:
            return cls.FIRST_ROW_83 if (p, a, b) == (3, 1, 2) else cls.FIRST_ROW
        raise ValueError(f"Unknown family '{name}'.")


def require_odd(p: int, what: str):
    if p == 2:
        raise CharacteristicError(
            f"{what} is only valid in odd characteristic; p = 2 is outside its scope "
            f"(the extension criterion fails there)."
        )


@dataclass
class Certificate:
    """
    A candidate u with its psi multiples and verdicts. ``multiples`` maps
    (i, v) to c with psi_{i,v}(u) = c f_nu, or to None when the image is not
    such a multiple.
    """

    partition: Partition
    p: int
    u: GFpVector = field(repr=False)
    multiples: Multiples
    condition1_ok: bool
    condition2_ok: bool
    provenance: Provenance = Provenance.USER_SUPPLIED
    failure: Optional[str] = None
    condition2_implied: bool = False

    @property
    def verified(self) -> bool:
        return self.condition1_ok and self.condition2_ok

    @property
    def ambient_dim(self) -> int:
        return len(self.u)

    def to_record(self) -> dict:
        return {
            "lambda": list(self.partition.parts),
            "p": self.p,
            "ambient_dim": self.ambient_dim,
            "u": [[rank, coeff] for rank, coeff in self.u.terms()],
            "multiples": [[i, v, c] for (i, v), c in sorted(self.multiples.items())],
            "condition1_ok": self.condition1_ok,
            "condition2_ok": self.condition2_ok,
            "provenance": self.provenance.value,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Certificate":
        """Load a stored certificate. The stored verdicts are kept as they are; re-verify to trust them."""
        try:
            partition = Partition(tuple(record["lambda"]))
            p = int(record["p"])
            ambient_dim = int(record["ambient_dim"])
            terms = [(int(r), int(c)) for r, c in record["u"]]
            multiples = {
                (int(i), int(v)): None if c is None else int(c)
                for i, v, c in record.get("multiples", [])
            }
            provenance = Provenance(record.get("provenance", Provenance.USER_SUPPLIED.value))
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"Malformed certificate record: {e}")
        expected = multinomial(partition.parts)
        if ambient_dim != expected:
            raise ValueError(
                f"Certificate ambient dimension {ambient_dim} does not match M^{partition} ({expected})."
            )
        u = GFpVector.from_terms(p, ambient_dim, terms)
        return cls(
            partition,
            p,
            u,
            multiples,
            bool(record.get("condition1_ok", False)),
            bool(record.get("condition2_ok", False)),
            provenance,
        )


def h0_direct(partition: Partition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> bool:
    """True iff f_lambda is killed by every psi map, i.e. f_lambda lies in S^lambda."""
    f = f_lambda(partition, p, cap)
    for psi in iter_psi_maps(partition, p, cap):
        if not psi.apply(f).is_zero():
            return False
    return True


def f_multiples(partition: Partition, p: int) -> Dict[Tuple[int, int], int]:
    """b_{i,v} with psi_{i,v}(f_lambda) = b_{i,v} f_nu."""
    return {(i, v): f_image_scalar(partition, i, v, p) for i, v in psi_indices(partition)}


def condition2_from_multiples(
    f_scalars: Dict[Tuple[int, int], int], multiples: Multiples, p: int
) -> bool:
    """
    Condition (2) in scalar form: psi_{i,v}(a f_lambda - u) = (a b_{i,v} - c_{i,v}) f_nu,
    so (2) fails iff some a != 0 has a b_{i,v} = c_{i,v} for every (i, v).
    A non-multiple image can never be matched.
    """
    if any(c is None for c in multiples.values()):
        return True
    for a in range(1, p):
        if all((a * f_scalars[key] - c) % p == 0 for key, c in multiples.items()):
            return False
    return True


def nonsplit_witness(
    f_scalars: Dict[Tuple[int, int], int], multiples: Multiples, p: int
) -> Dict[int, Tuple[int, int]]:
    """For each a != 0, the first (i, v) where a b_{i,v} differs from c_{i,v}."""
    witness = {}
    for a in range(1, p):
        for key in sorted(multiples):
            c = multiples[key]
            if c is None or (a * f_scalars[key] - c) % p != 0:
                witness[a] = key
                break
    return witness


def verify_certificate(
    partition: Partition,
    p: int,
    u: GFpVector,
    provenance: Provenance = Provenance.USER_SUPPLIED,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> Certificate:
    """
    Check conditions (1) and (2) for u by applying every psi map.

    Raises:
        CharacteristicError: p = 2.
        ValueError: u does not live in M^lambda over GF(p).
    """
    require_odd(p, "Certificate verification")
    basis = tabloid_basis(partition, cap)
    if len(u) != basis.size or u.p != p:
        raise ValueError(
            f"Vector of length {len(u)} over GF({u.p}) is not in M^{partition} over GF({p}) "
            f"(dim {basis.size})."
        )
    multiples: Multiples = {}
    failure = None
    for psi in iter_psi_maps(partition, p, cap):
        c = psi.image_multiple(u)
        multiples[(psi.i, psi.v)] = c
        if c is None and failure is None:
            failure = f"{psi.label} image is not a multiple of f_{psi.target}"
    constant = all(c is not None for c in multiples.values())
    condition1 = constant and any(c for c in multiples.values())
    if constant and not condition1 and failure is None:
        failure = "every psi image vanishes, so u lies in the Specht module"

    scalars = f_multiples(partition, p)
    h0 = not any(scalars.values())
    condition2 = condition1 and condition2_from_multiples(scalars, multiples, p)
    if condition1 and not condition2 and failure is None:
        failure = "u - a f_lambda lies in the Specht module for some a != 0"
    if condition1 and h0:
        logging.info(f"f_{partition} lies in S^{partition}; condition (2) follows from condition (1)")
    certificate = Certificate(
        partition,
        p,
        u,
        multiples,
        condition1,
        condition2,
        Provenance(provenance),
        failure,
        condition2_implied=h0,
    )
    logging.debug(
        f"Certificate for {partition}, p={p}: condition1={condition1}, condition2={condition2}"
    )
    return certificate


@dataclass
class H1Decision:
    partition: Partition
    p: int
    nonvanishing: bool
    certificate: Optional[Certificate]
    diagnostic_dim: int
    dim_specht: int
    dim_w: int
    ambient_dim: int
    h0: bool


def h1_nonvanishing(
    partition: Partition,
    p: int,
    cap: int = DEFAULT_DIMENSION_CAP,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> H1Decision:
    """
    Decide H^1(S_d, S^lambda) != 0 by comparing W with S^lambda + span(f_lambda).

    On a positive answer the certificate is the first echelon basis vector of
    W outside S^lambda + span(f_lambda); it is verified before it is returned.

    Raises:
        CharacteristicError: p = 2.
        DimensionCapError: M^lambda is beyond the dense elimination cap.
    """
    require_odd(p, "The H^1 decision")
    basis = tabloid_basis(partition, cap)
    n = basis.size
    check_dense_cap(n, dense_cap, f"H^1 decision for {partition}")
    h0 = h0_direct(partition, p, cap)
    maps = psi_family(partition, p, cap)
    f = f_lambda(partition, p, cap)
    specht = specht_standard_basis(partition, p, cap)
    if not maps:
        return H1Decision(partition, p, False, None, 0, specht.dim, n, n, h0)

    lower = subspace_sum(specht, span(p, n, [f]))
    constraints = [(psi.matrix, [f_lambda(psi.target, p, cap)]) for psi in maps]
    w = solve_affine(constraints, n, p, floor_dim=lower.dim)
    diagnostic = w.dim - lower.dim
    logging.info(
        f"{partition}, p={p}: dim M={n}, dim S={specht.dim}, dim W={w.dim}, "
        f"dim(S+f)={lower.dim}"
    )
    if diagnostic == 0:
        return H1Decision(partition, p, False, None, 0, specht.dim, w.dim, n, h0)

    u = next(vector for vector in w.vectors() if not contains(lower, vector))
    certificate = verify_certificate(partition, p, u, Provenance.SEARCHED, cap)
    if not certificate.verified:
        raise RuntimeError(
            f"Searched certificate for {partition}, p={p} failed verification: {certificate.failure}"
        )
    return H1Decision(partition, p, True, certificate, diagnostic, specht.dim, w.dim, n, h0)


@dataclass
class ExtensionModule:
    """
    U = span(S^lambda, u). ``basis`` is the echelon basis of U when the ambient
    space is small enough for dense elimination, otherwise None.
    """

    certificate: Certificate = field(repr=False)
    dim: int
    specht_dim: int
    basis: Optional[GFpSubspace] = field(default=None, repr=False)
    witness: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    @property
    def ambient_dim(self) -> int:
        return self.certificate.ambient_dim


def extension_module(
    certificate: Certificate,
    cap: int = DEFAULT_DIMENSION_CAP,
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> ExtensionModule:
    """
    Check that span(S^lambda, u) is a submodule with trivial top and return it.

    Raises:
        ValueError: the certificate did not verify.
        RuntimeError: sigma u - u falls outside S^lambda for a Coxeter generator.
    """
    if not certificate.verified:
        raise ValueError("Only verified certificates span an extension module.")
    partition, p, u = certificate.partition, certificate.p, certificate.u
    maps = psi_family(partition, p, cap)
    for index, sigma in enumerate(coxeter_generators(partition.d), start=1):
        moved = act_vector(sigma, partition, u, cap) - u
        if not in_specht(partition, p, moved, cap, maps):
            raise RuntimeError(f"s_{index} u - u is not in S^{partition}; U is not a submodule.")
    specht_dim = hook_length_dimension(partition)
    scalars = f_multiples(partition, p)
    witness = {}
    if any(scalars.values()):
        witness = nonsplit_witness(scalars, certificate.multiples, p)
        if len(witness) != p - 1:
            raise RuntimeError(f"No nonsplit witness for {partition}, p={p}.")

    basis = None
    if certificate.ambient_dim <= dense_cap:
        specht = specht_standard_basis(partition, p, cap)
        basis = subspace_sum(specht, span(p, certificate.ambient_dim, [u]))
        if basis.dim != specht_dim + 1:
            raise RuntimeError(
                f"span(S^{partition}, u) has dimension {basis.dim}, expected {specht_dim + 1}."
            )
        if witness and contains(basis, f_lambda(partition, p, cap)):
            raise RuntimeError(f"f_{partition} lies in span(S^{partition}, u); the extension splits.")
    else:
        logging.info(
            f"M^{partition} has dimension {certificate.ambient_dim} > {dense_cap}; "
            f"closure checked by membership only"
        )
    return ExtensionModule(certificate, specht_dim + 1, specht_dim, basis, witness)


def _permutation_actions(shape: Composition, cap: int):
    basis = tabloid_basis(shape, cap)
    return basis, [basis.permutation_of(sigma) for sigma in coxeter_generators(shape.d)]


def specht_actions(partition: Partition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> List[np.ndarray]:
    """Matrices of the Coxeter generators on the echelon basis of S^lambda."""
    subspace = specht_standard_basis(partition, p, cap)
    rows = subspace.basis.astype(np.int64)
    pivots = list(subspace.pivots)
    _, perms = _permutation_actions(partition, cap)
    actions = []
    for perm in perms:
        moved = np.empty_like(rows)
        moved[:, perm] = rows
        # column k holds the echelon coordinates of sigma b_k
        actions.append(moved[:, pivots].T % p)
    return actions


def permutation_actions(shape: Composition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> List[np.ndarray]:
    basis, perms = _permutation_actions(shape, cap)
    actions = []
    for perm in perms:
        matrix = np.zeros((basis.size, basis.size), dtype=np.int64)
        matrix[perm, np.arange(basis.size)] = 1
        actions.append(matrix)
    return actions


def _coxeter_relations(generators: int) -> List[List[int]]:
    relations = []
    for i in range(generators):
        relations.append([i, i])
    for i in range(generators - 1):
        relations.append([i, i + 1] * 3)
    for i in range(generators):
        for j in range(i + 2, generators):
            relations.append([i, j, i, j])
    return relations


def _rank(p: int, n: int, blocks) -> int:
    builder = RowSpaceBuilder(p, n)
    for block in blocks:
        builder.add(block)
    return builder.rank


def cocycle_dimension(actions: List[np.ndarray], p: int) -> int:
    """
    dim Z^1 - dim B^1 for a module given by the matrices of s_1..s_{d-1}.

    A cocycle is fixed by x_j = delta(s_j). For a relation g_1 ... g_k = 1 the
    cocycle identity delta(gh) = delta(g) + g delta(h) gives
    sum_j rho(g_1 ... g_{j-1}) x_{g_j} = 0.
    """
    if not actions:
        return 0
    m = actions[0].shape[0]
    count = len(actions)
    identity = np.eye(m, dtype=np.int64)
    blocks = []
    for relation in _coxeter_relations(count):
        row = np.zeros((m, count * m), dtype=np.int64)
        prefix = identity
        for g in relation:
            row[:, g * m : (g + 1) * m] += prefix
            prefix = prefix @ actions[g] % p
        blocks.append(row % p)
    z1 = count * m - _rank(p, count * m, blocks)
    b1 = _rank(p, m, [np.vstack([(a - identity) % p for a in actions])])
    return z1 - b1


def _check_oracle(d: int, p: int, max_d: int):
    if d > max_d:
        raise DimensionCapError(
            f"The cocycle oracle is limited to d <= {max_d}; d = {d}. Raise oracle_max_d to at least {d}.",
            required=d,
            cap=max_d,
        )
    if p == 2:
        logging.warning("Cocycle oracle in characteristic 2 is exploratory only")


def cocycle_h1_dimension(
    partition: Partition,
    p: int,
    max_d: int = DEFAULT_ORACLE_MAX_D,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> int:
    """dim H^1(S_d, S^lambda) from cocycles on the Coxeter presentation."""
    _check_oracle(partition.d, p, max_d)
    dim = cocycle_dimension(specht_actions(partition, p, cap), p)
    logging.debug(f"Cocycle oracle: dim H^1(S_{partition.d}, S^{partition}) = {dim} over GF({p})")
    return dim


def permutation_module_h1_dimension(
    shape: Composition,
    p: int,
    max_d: int = DEFAULT_ORACLE_MAX_D,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> int:
    """dim H^1(S_d, M^shape), which vanishes for odd p."""
    _check_oracle(shape.d, p, max_d)
    return cocycle_dimension(permutation_actions(shape, p, cap), p)


def fixed_space(shape: Composition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> GFpSubspace:
    """Vectors of M^shape fixed by every Coxeter generator."""
    basis, perms = _permutation_actions(shape, cap)
    n = basis.size
    builder = RowSpaceBuilder(p, n)
    for perm in perms:
        # (sigma v)_{perm[k]} = v_k, so sigma v = v reads v_k = v_{perm[k]}
        rows = np.zeros((n, n), dtype=np.int64)
        rows[np.arange(n), np.arange(n)] += 1
        rows[np.arange(n), perm] -= 1
        builder.add(rows)
    return builder.kernel()
