"""Euler-Fermat quotients and their lifting and localization congruences.

q_n(a) denotes (a^phi(n) - 1) / n, an integer whenever gcd(a, n) = 1.  The
lemma checks relate q at different moduli: lemma1 ties phi(p^alpha) to a
Bernoulli number p-adically, lemma3 lifts q_n to q_{n^2}, and lemma4
localizes the combination 2 q_n - n q_n^2 at one prime-power part of n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .arith import Residue, euler_phi, factorize, is_prime, mod_inv
from .bernoulli import BernoulliCache, bernoulli_number, p_adic_valuation, rational_mod
from .errors import NotCoprimeError, PreconditionError, PrimeDivisibilityError
from .report import CongruenceReport, IdentityId

__all__ = [
    "QuotientValue",
    "fermat_quotient",
    "fermat_quotient_mod",
    "lemma1_check",
    "lemma3_check",
    "lemma4_check",
]


@dataclass(frozen=True)
class QuotientValue:
    """q_n(a), held exactly: n * value == a^phi(n) - 1."""

    n: int
    a: int
    value: int


def _require_modulus(n: int) -> None:
    if n < 2:
        raise PreconditionError(f"n must be > 1, got {n}")


def _require_coprime(a: int, n: int) -> None:
    g = gcd(a, n)
    if g != 1:
        raise NotCoprimeError(f"gcd({a}, {n}) = {g}; need coprime arguments")


def fermat_quotient(n: int, a: int) -> QuotientValue:
    """The exact Euler-Fermat quotient (a^phi(n) - 1) / n.

    Integrality is Euler's theorem.  This path materializes a^phi(n) in
    full, so it is the oracle route; fermat_quotient_mod is the production
    route for reduced values.
    """
    _require_modulus(n)
    _require_coprime(a, n)
    phi = euler_phi(factorize(n))
    quotient, remainder = divmod(a**phi - 1, n)
    if remainder:  # unreachable for coprime a; guards the type invariant
        raise ArithmeticError(f"{n} does not divide {a}^{phi} - 1")
    return QuotientValue(n, a, quotient)


def fermat_quotient_mod(n: int, a: int, m: int) -> Residue:
    """q_n(a) mod m without materializing a^phi(n).

    Computes a^phi(n) mod n*m; subtracting 1 leaves a multiple of n whose
    quotient is exactly q_n(a) reduced mod m.
    """
    _require_modulus(n)
    if m < 1:
        raise PreconditionError(f"modulus must be >= 1, got {m}")
    _require_coprime(a, n)
    phi = euler_phi(factorize(n))
    residue = pow(a, phi, n * m)
    return Residue((residue - 1) % (n * m) // n, m)


def lemma1_check(
    p: int, alpha: int, cache: BernoulliCache | None = None
) -> CongruenceReport:
    """Check phi(p^alpha) == p^alpha * B_{phi(p^{2 alpha})} mod p^{2 alpha}.

    The comparison is p-adic: the Bernoulli number carries exactly one p in
    its denominator, so p^alpha * B is p-integral but not an integer, and
    modular inversion does not apply.  The report records the valuation of
    the difference and the required lower bound 2*alpha.
    """
    if not is_prime(p):
        raise PreconditionError(f"p must be prime, got {p}")
    if alpha < 1:
        raise PreconditionError(f"alpha must be >= 1, got {alpha}")
    modulus = p ** (2 * alpha)
    lhs_value = p ** (alpha - 1) * (p - 1)  # phi(p^alpha)
    index = modulus // p * (p - 1)  # phi(p^{2 alpha})
    rhs_value = p**alpha * bernoulli_number(index, cache)
    valuation = p_adic_valuation(lhs_value - rhs_value, p)
    required = 2 * alpha
    return CongruenceReport(
        identity=IdentityId.LEMMA_1,
        params={"p": p, "alpha": alpha},
        modulus=modulus,
        lhs=Residue(lhs_value % modulus, modulus),
        rhs=rational_mod(rhs_value, modulus),
        holds=valuation >= required,
        valuation=valuation,
        required=required,
    )


def lemma3_check(n: int, a: int) -> CongruenceReport:
    """Check the lift q_{n^2}(a) == q_n(a) - (n/2) q_n(a)^2 mod n^2.

    Stated for gcd(n, 6a) = 1, so both 2 and the quotients exist mod n^2.
    """
    _require_modulus(n)
    g = gcd(n, 6 * a)
    if g != 1:
        raise NotCoprimeError(f"gcd({n}, 6*{a}) = {g}; need gcd(n, 6a) = 1")
    nsq = n * n
    lhs = fermat_quotient_mod(nsq, a, nsq)
    q = fermat_quotient_mod(n, a, nsq).rep
    half_n = mod_inv(2, nsq).rep * n % nsq
    rhs = (q - half_n * (q * q % nsq)) % nsq
    return CongruenceReport(
        identity=IdentityId.LEMMA_3,
        params={"n": n, "a": a},
        modulus=nsq,
        lhs=lhs,
        rhs=Residue(rhs, nsq),
        holds=lhs.rep == rhs,
    )


def lemma4_check(n: int, a: int, p: int) -> CongruenceReport:
    """Check localization of 2 q_n(a) - n q_n(a)^2 at the p-part of n.

    Writing n = p^alpha * q with p not dividing q, the combination is
    congruent to (phi(q)/q) * (2 q_{p^alpha}(a) - p^alpha q_{p^alpha}(a)^2)
    mod p^{2 alpha}.  alpha is derived from n and p.
    """
    _require_modulus(n)
    _require_coprime(a, n)
    if not is_prime(p):
        raise PreconditionError(f"p must be prime, got {p}")
    if n % p:
        raise PrimeDivisibilityError(f"{p} does not divide {n}")
    factored = factorize(n)
    alpha = factored.exponent_of(p)
    q = factored.cofactor(p)
    modulus = p ** (2 * alpha)
    qn = fermat_quotient_mod(n, a, modulus).rep
    lhs = (2 * qn - n % modulus * (qn * qn % modulus)) % modulus
    prime_power = p**alpha
    qp = fermat_quotient_mod(prime_power, a, modulus).rep
    local = (2 * qp - prime_power % modulus * (qp * qp % modulus)) % modulus
    phi_q = euler_phi(factorize(q))
    rhs = phi_q * mod_inv(q, modulus).rep % modulus * local % modulus
    return CongruenceReport(
        identity=IdentityId.LEMMA_4,
        params={"n": n, "a": a, "p": p, "alpha": alpha},
        modulus=modulus,
        lhs=Residue(lhs, modulus),
        rhs=Residue(rhs, modulus),
        holds=lhs == rhs,
    )


def lemma3_exact_sides(n: int, a: int) -> tuple[Fraction, Fraction]:
    """Both sides of lemma3 from fully materialized quotients (oracle route)."""
    _require_modulus(n)
    g = gcd(n, 6 * a)
    if g != 1:
        raise NotCoprimeError(f"gcd({n}, 6*{a}) = {g}; need gcd(n, 6a) = 1")
    lhs = Fraction(fermat_quotient(n * n, a).value)
    q = Fraction(fermat_quotient(n, a).value)
    rhs = q - Fraction(n, 2) * q * q
    return lhs, rhs


def lemma4_exact_sides(n: int, a: int, p: int) -> tuple[Fraction, Fraction]:
    """Both sides of lemma4 from fully materialized quotients (oracle route)."""
    _require_modulus(n)
    _require_coprime(a, n)
    if not is_prime(p):
        raise PreconditionError(f"p must be prime, got {p}")
    if n % p:
        raise PrimeDivisibilityError(f"{p} does not divide {n}")
    factored = factorize(n)
    alpha = factored.exponent_of(p)
    q = factored.cofactor(p)
    qn = Fraction(fermat_quotient(n, a).value)
    lhs = 2 * qn - n * qn * qn
    prime_power = p**alpha
    if prime_power > 1:
        qp = Fraction(fermat_quotient(prime_power, a).value)
    else:  # cannot happen: p divides n
        qp = Fraction(0)
    local = 2 * qp - prime_power * qp * qp
    rhs = Fraction(euler_phi(factorize(q)), q) * local
    return lhs, rhs
