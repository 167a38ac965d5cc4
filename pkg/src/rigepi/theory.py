"""Branching-process engine: final-size laws, local outbreak mixture, PGFs, R_0, extinction.

Conventions
-----------
``final_size_dist(k, p)`` is the law of the number ultimately infected among
k initially susceptible group members, EXCLUDING the index case (so the
clique-cluster size is that count plus one).  Under this convention the
local outbreak R mixes the group's susceptible count over Poisson(gamma),
R_0 = beta*gamma*E[R] equals beta*gamma**2 at p = 1 and tends to p*mu as the
clustering vanishes.  k = 0 means an otherwise-empty group: a point mass at
zero further infections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom, poisson

from .errors import CapacityError, DomainError

K_CAP = 1000
DEFAULT_EPSILON = 1e-12
NEAR_CRITICAL_WINDOW = 1e-6


def _validate_p(p: float) -> None:
    if not 0 <= p <= 1:
        raise DomainError(f"transmission probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class FinalSizeDist:
    """Law of the final infected count among k susceptibles (index excluded)."""

    k: int
    p: float
    pmf: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.arange(self.k + 1) @ self.pmf)


@dataclass(frozen=True)
class LocalOutbreakDist:
    """Law of the within-group outbreak size R, mixed over group sizes."""

    gamma: float
    p: float
    pmf: np.ndarray
    truncation_k: int
    truncated_mass: float

    @property
    def mean(self) -> float:
        return float(np.arange(len(self.pmf)) @ self.pmf)


@dataclass(frozen=True)
class TheorySolution:
    """Threshold and extinction-probability solution at one parameter point."""

    beta: float
    gamma: float
    p: float
    r_nought: float
    rho: float
    pi: float
    iterations: int
    residual: float
    truncation_k: int
    near_critical: bool
    converged: bool


def final_size_dist(k: int, p: float, k_cap: int = K_CAP) -> FinalSizeDist:
    """Reed-Frost final-size law among k susceptibles with one initial infective.

    Forward dynamic programming on the chain state (susceptibles, infectives):
    from (s, i) the next infective count is Binomial(s, 1 - (1-p)**i).  Uses
    only convex combinations, so it is stable for large k.
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if k > k_cap:
        raise CapacityError(f"k = {k} exceeds cap {k_cap}")
    _validate_p(p)
    if k == 0 or p == 0:
        pmf = np.zeros(k + 1)
        pmf[0] = 1.0
        return FinalSizeDist(k=k, p=p, pmf=pmf)
    if p == 1:
        pmf = np.zeros(k + 1)
        pmf[k] = 1.0
        return FinalSizeDist(k=k, p=p, pmf=pmf)

    logq = math.log1p(-p)
    lf = gammaln(np.arange(k + 2) + 1.0)
    # mass[s, i]: probability of currently s susceptibles and i infectives
    mass = np.zeros((k + 1, k + 2))
    mass[k, 1] = 1.0
    final = np.zeros(k + 1)
    for s in range(k, -1, -1):
        imax = k + 1 - s
        a = mass[s, 1 : imax + 1]
        if not a.any():
            continue
        if s == 0:
            final[k] += a.sum()
            continue
        i = np.arange(1, imax + 1)
        ip = np.arange(0, s + 1)
        log_pi = np.log(-np.expm1(i * logq))  # log(1 - q**i)
        logpmf = (
            (lf[s] - lf[ip] - lf[s - ip])[None, :]
            + np.outer(log_pi, ip)
            + np.outer(i * logq, s - ip)
        )
        v = a @ np.exp(logpmf)
        final[k - s] += v[0]
        if s >= 1:
            ii = np.arange(1, s + 1)
            mass[s - ii, ii] += v[1:]
    return FinalSizeDist(k=k, p=p, pmf=final)


def connectivity_probs(max_m: int, p: float) -> tuple[np.ndarray, np.ndarray]:
    """P(G(m, p) is connected) for m = 0..max_m, with log values.

    Standard recursion on the component of a fixed vertex:
    Pc(m) = 1 - sum_{j<m} C(m-1, j-1) Pc(j) q**(j(m-j)).
    """
    _validate_p(p)
    pc = np.ones(max_m + 1)
    logpc = np.zeros(max_m + 1)
    if p == 1 or max_m < 2:
        return pc, logpc
    if p == 0:
        pc[2:] = 0.0
        logpc[2:] = -np.inf
        return pc, logpc
    logq = math.log1p(-p)
    lf = gammaln(np.arange(max_m + 1) + 1.0)
    for m in range(2, max_m + 1):
        j = np.arange(1, m)
        logterm = (lf[m - 1] - lf[j - 1] - lf[m - j]) + logpc[j] + j * (m - j) * logq
        val = max(1.0 - float(np.exp(logterm).sum()), 0.0)
        pc[m] = val
        logpc[m] = math.log(val) if val > 0 else -np.inf
    return pc, logpc


def final_size_table(kmax: int, p: float) -> np.ndarray:
    """Matrix F with F[k, j] = final_size_dist(k, p).pmf[j] for all k <= kmax.

    Uses the clique-percolation identity
    F[k, j] = C(k, j) * Pc(j+1) * q**((j+1)(k-j))
    with Pc the connectivity probability of G(m, p); one O(kmax^2) pass
    instead of kmax separate chain DPs.
    """
    _validate_p(p)
    F = np.zeros((kmax + 1, kmax + 1))
    ks = np.arange(kmax + 1)
    if p == 0:
        F[:, 0] = 1.0
        return F
    if p == 1:
        F[ks, ks] = 1.0
        return F
    _, logpc = connectivity_probs(kmax + 1, p)
    logq = math.log1p(-p)
    lf = gammaln(ks + 1.0)
    kk, jj = np.meshgrid(ks, ks, indexing="ij")
    with np.errstate(invalid="ignore"):
        logF = (
            (lf[kk] - lf[jj] - np.where(jj <= kk, lf[kk - jj], 0.0))
            + logpc[jj + 1]
            + (jj + 1.0) * (kk - jj) * logq
        )
    logF[jj > kk] = -np.inf
    return np.exp(logF)


def _poisson_truncation(gamma: float, epsilon: float, k_cap: int) -> int:
    """Minimal K with P(Poisson(gamma) > K) < epsilon."""
    K = max(int(poisson.isf(epsilon, gamma)), 0)
    while poisson.sf(K, gamma) >= epsilon:
        K += 1
    while K > 0 and poisson.sf(K - 1, gamma) < epsilon:
        K -= 1
    if K > k_cap:
        raise CapacityError(
            f"Poisson({gamma}) truncation needs K = {K} > cap {k_cap}"
        )
    return K


def local_outbreak_dist(
    gamma: float,
    p: float,
    epsilon: float = DEFAULT_EPSILON,
    k_cap: int = K_CAP,
) -> LocalOutbreakDist:
    """Law of R: the final-size law mixed over Poisson(gamma) susceptible counts."""
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not 0 < epsilon <= 1e-6:
        raise DomainError(f"epsilon must lie in (0, 1e-6], got {epsilon}")
    _validate_p(p)
    K = _poisson_truncation(gamma, epsilon, k_cap)
    weights = poisson.pmf(np.arange(K + 1), gamma)
    pmf = weights @ final_size_table(K, p)
    return LocalOutbreakDist(
        gamma=gamma,
        p=p,
        pmf=pmf,
        truncation_k=K,
        truncated_mass=float(poisson.sf(K, gamma)),
    )


def _pgf_of_dist(pmf: np.ndarray, s) -> np.ndarray:
    return np.polynomial.polynomial.polyval(s, pmf)


def offspring_pgf(
    beta: float,
    gamma: float,
    p: float,
    s,
    epsilon: float = DEFAULT_EPSILON,
    dist: LocalOutbreakDist | None = None,
):
    """Limit offspring PGF f(s) = exp(beta*gamma*(E[s^R] - 1))."""
    if dist is None:
        dist = local_outbreak_dist(gamma, p, epsilon)
    return np.exp(beta * gamma * (_pgf_of_dist(dist.pmf, s) - 1.0))


def finite_n_offspring_pgf(
    n: int,
    beta: float,
    gamma: float,
    p: float,
    s,
    epsilon: float = DEFAULT_EPSILON,
    k_cap: int = K_CAP,
):
    """Finite-n offspring PGF (1 - gamma/n + (gamma/n) E[s^{R_n}])**m.

    R_n mixes the final-size law over Binomial(n, gamma/n) susceptible counts.
    """
    params_r = gamma / n
    if not 0 < params_r <= 1:
        raise DomainError(f"gamma/n = {params_r} must lie in (0, 1]")
    _validate_p(p)
    m = int(math.floor(beta * n))
    K = min(int(binom.isf(epsilon, n, params_r)) + 1, n)
    while K < n and binom.sf(K, n, params_r) >= epsilon:
        K += 1
    if K > k_cap:
        raise CapacityError(f"Binomial truncation needs K = {K} > cap {k_cap}")
    weights = binom.pmf(np.arange(K + 1), n, params_r)
    pmf_rn = weights @ final_size_table(K, p)
    ex = _pgf_of_dist(pmf_rn, s) + binom.sf(K, n, params_r)  # tail mass at s^... ~ 1
    return (1.0 - params_r + params_r * ex) ** m


def r_nought(
    beta: float,
    gamma: float,
    p: float,
    epsilon: float = DEFAULT_EPSILON,
    dist: LocalOutbreakDist | None = None,
) -> float:
    """Epidemic threshold R_0 = beta * gamma * E[R]."""
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if dist is None:
        dist = local_outbreak_dist(gamma, p, epsilon)
    return beta * gamma * dist.mean


def _smallest_fixed_point(
    f, tol: float = 1e-13, max_evals: int = 200_000
) -> tuple[float, int, bool]:
    """Smallest fixed point of an increasing convex PGF on [0, 1].

    Monotone iteration from 0 with Aitken (Steffensen) acceleration; an
    accelerated candidate is accepted only while f(a) >= a, which keeps the
    iterates below the smallest root.  An overshooting candidate yields a
    bracket that is closed by bisection.
    """
    s = 0.0
    evals = 0
    while evals < max_evals:
        s1 = f(s)
        s2 = f(s1)
        evals += 2
        if abs(s2 - s1) < tol:
            return min(s2, 1.0), evals, True
        d = s2 - 2.0 * s1 + s
        if d != 0.0:
            a = s - (s1 - s) ** 2 / d
            if s2 < a <= 1.0:
                fa = f(a)
                evals += 1
                if fa >= a:
                    if abs(fa - a) < tol:
                        return min(fa, 1.0), evals, True
                    s = fa
                    continue
                # overshot the smallest root: bracket [s2, a]
                lo, hi = s2, a
                while hi - lo > 1e-15 and evals < max_evals:
                    mid = 0.5 * (lo + hi)
                    evals += 1
                    if f(mid) >= mid:
                        lo = mid
                    else:
                        hi = mid
                return lo, evals, True
        s = s2
    return s, evals, False


def extinction_prob(
    beta: float,
    gamma: float,
    p: float,
    epsilon: float = DEFAULT_EPSILON,
    tol: float = 1e-13,
) -> TheorySolution:
    """Extinction probability rho (smallest root of f(rho) = rho) and pi = 1 - rho."""
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    dist = local_outbreak_dist(gamma, p, epsilon)
    r0 = beta * gamma * dist.mean
    f = lambda s: float(offspring_pgf(beta, gamma, p, s, dist=dist))
    rho, evals, converged = _smallest_fixed_point(f, tol=tol)
    rho = min(max(rho, 0.0), 1.0)
    if r0 <= 1.0:
        # at or below threshold extinction is certain; the iteration can
        # stop a hair short of 1, so snap to the exact root
        rho = 1.0
    pi = max(1.0 - rho, 0.0)
    return TheorySolution(
        beta=beta,
        gamma=gamma,
        p=p,
        r_nought=r0,
        rho=rho,
        pi=pi,
        iterations=evals,
        residual=abs(f(rho) - rho),
        truncation_k=dist.truncation_k,
        near_critical=abs(r0 - 1.0) < NEAR_CRITICAL_WINDOW,
        converged=converged,
    )


def compound_poisson_pmf(lam: float, severity: np.ndarray, length: int) -> np.ndarray:
    """PMF of a Poisson(lam)-sum of i.i.d. variables with the given severity pmf.

    Panjer recursion for the compound Poisson family; severity mass at zero
    is folded into the starting value.
    """
    if lam < 0:
        raise DomainError(f"rate must be nonnegative, got {lam}")
    severity = np.asarray(severity, dtype=np.float64)
    out = np.zeros(length)
    out[0] = math.exp(lam * (severity[0] - 1.0))
    j_all = np.arange(1, len(severity))
    jq = j_all * severity[1:]
    for k in range(1, length):
        j = j_all[: min(k, len(severity) - 1)]
        out[k] = lam / k * float(jq[: len(j)] @ out[k - j])
    return out


def offspring_pmf(
    beta: float,
    gamma: float,
    p: float,
    length: int,
    epsilon: float = DEFAULT_EPSILON,
    dist: LocalOutbreakDist | None = None,
) -> np.ndarray:
    """PMF of the offspring variable Z(1): Poisson(beta*gamma) groups, each adding an R."""
    if dist is None:
        dist = local_outbreak_dist(gamma, p, epsilon)
    return compound_poisson_pmf(beta * gamma, dist.pmf, length)


def total_progeny_pmf(
    beta: float,
    gamma: float,
    p: float,
    max_size: int,
    epsilon: float = DEFAULT_EPSILON,
) -> tuple[np.ndarray, float]:
    """Total-progeny law of the limit branching process, over {1, ..., max_size}.

    Dwass identity: P(E = t) = (1/t) * P(Z_1 + ... + Z_t = t - 1) with Z_i
    i.i.d. offspring; evaluated by incremental convolution powers of the
    offspring pmf.  Returns (pmf indexed from 1, residual mass beyond
    max_size); the residual is at least the explosion probability pi.
    """
    if max_size < 1:
        raise DomainError(f"max_size must be >= 1, got {max_size}")
    if max_size > 10_000:
        raise CapacityError(f"max_size = {max_size} exceeds cap 10000")
    h = offspring_pmf(beta, gamma, p, max_size, epsilon=epsilon)
    # trim negligible tail of the offspring pmf to keep convolutions short
    nz = np.nonzero(np.cumsum(h[::-1]) > 1e-15)[0]
    h_trunc = h[: max(len(h) - nz[0], 1)] if len(nz) else h[:1]
    e = np.zeros(max_size + 1)
    power = h_trunc.copy()
    e[1] = power[0]
    for t in range(2, max_size + 1):
        power = np.convolve(power, h_trunc)[:max_size]
        e[t] = power[t - 1] / t
    residual = max(1.0 - float(e.sum()), 0.0)
    return e[1:], residual


def compound_poisson_degree_pmf(
    beta: float, gamma: float, max_degree: int
) -> np.ndarray:
    """Asymptotic degree law: Poisson(beta*gamma)-sum of Poisson(gamma) group contributions."""
    if max_degree < 0:
        raise DomainError(f"max_degree must be nonnegative, got {max_degree}")
    severity = poisson.pmf(np.arange(max_degree + 1), gamma)
    return compound_poisson_pmf(beta * gamma, severity, max_degree + 1)
