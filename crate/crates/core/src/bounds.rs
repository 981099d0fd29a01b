//! Exact rational ledger of the optimal shrinking factors and fidelities.
//!
//! Nothing here touches floating point except [`to_f64`] and
//! [`cross_check`], which bridge the ledger to simulated values.
//!
//! - cloning: `η(N,M) = N(M+2) / (M(N+2))`, `F(N,M) = (NM+N+M) / (M(N+2))`
//! - estimation on `M` copies: `η̄(M) = M/(M+2)`, `F̄(M) = (M+1)/(M+2)`

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::exec::Exec;

pub type Rational = BigRational;

fn int(v: usize) -> BigInt {
    BigInt::from(v)
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

fn check_pair(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if m < n {
        return Err(invalid(format!("M = {m} is smaller than N = {n}")));
    }
    Ok(())
}

/// Optimal N→M shrinking factor `N(M+2) / (M(N+2))`, for `1 ≤ N ≤ M`.
pub fn eta_opt(n: usize, m: usize) -> Result<Rational> {
    check_pair(n, m)?;
    Ok(ratio(int(n) * int(m + 2), int(m) * int(n + 2)))
}

/// Optimal N→M pure-state fidelity `(NM+N+M) / (M(N+2))`.
pub fn fidelity_opt(n: usize, m: usize) -> Result<Rational> {
    check_pair(n, m)?;
    Ok(ratio(
        int(n) * int(m) + int(n) + int(m),
        int(m) * int(n + 2),
    ))
}

/// Optimal estimation shrinking factor on `M` copies, `M/(M+2)`.
pub fn eta_meas_opt(m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(invalid("M must be at least 1"));
    }
    Ok(ratio(int(m), int(m + 2)))
}

/// Optimal estimation fidelity on `M` copies, `(M+1)/(M+2)`.
pub fn fidelity_meas_opt(m: usize) -> Result<Rational> {
    if m == 0 {
        return Err(invalid("M must be at least 1"));
    }
    Ok(ratio(int(m + 1), int(m + 2)))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// `|sim − exact| < tol`.
pub fn cross_check(sim: f64, exact: &Rational, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok((sim - to_f64(exact)).abs() < tol)
}

fn half_one_plus(r: &Rational) -> Rational {
    (Rational::one() + r) / Rational::from_integer(int(2))
}

/// One exact identity or inequality. `slack` is `rhs − lhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub eta_opt: Rational,
    pub fidelity_opt: Rational,
    /// `η̄(M)`, the estimation bound on the `M` clones.
    pub eta_meas_opt: Rational,
    pub fidelity_meas_opt: Rational,
    pub checks: Vec<IdentityCheck>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn values_in_unit_interval(&self) -> bool {
        [
            &self.eta_opt,
            &self.fidelity_opt,
            &self.eta_meas_opt,
            &self.fidelity_meas_opt,
        ]
        .iter()
        .all(|r| !r.is_negative() && **r <= Rational::one())
    }
}

fn equality(name: &'static str, lhs: &Rational, rhs: &Rational) -> IdentityCheck {
    let slack = rhs - lhs;
    IdentityCheck {
        name,
        holds: slack.is_zero(),
        slack,
    }
}

fn at_most(name: &'static str, lhs: &Rational, rhs: &Rational) -> IdentityCheck {
    let slack = rhs - lhs;
    IdentityCheck {
        name,
        holds: !slack.is_negative(),
        slack,
    }
}

/// Large `L` values at which the approach of `η(M,L)` to `η̄(M)` is checked.
pub const LIMIT_PROBES: [usize; 2] = [1_000, 1_000_000];

/// Exact check of every identity linking the cloning and estimation
/// factors for a chain `N ≤ M ≤ L`:
///
/// - `multiplicativity`: `η(N,M)·η(M,L) = η(N,L)`
/// - `concatenation-bound`: `η(N,M)·η̄(M) ≤ η̄(N)`
/// - `bound-saturation`: the same with equality
/// - `upper-bound-ratio`: `η(N,M) = η̄(N)/η̄(M)`
/// - `measurement-below-cloning`: `η̄(M) ≤ η(M,L)`
/// - `limit-decay`: `η(M,L') − η̄(M)` is positive and exactly `c/L'` at
///   both [`LIMIT_PROBES`], so it vanishes as `L' → ∞`
/// - `fidelity-relation`: `F(N,M) = (1 + η(N,M))/2`
/// - `estimation-fidelity-relation`: `F̄(M) = (1 + η̄(M))/2`
pub fn check_identities(n: usize, m: usize, l: usize) -> Result<BoundsReport> {
    check_pair(n, m)?;
    if l < m {
        return Err(invalid(format!("L = {l} is smaller than M = {m}")));
    }
    let eta_nm = eta_opt(n, m)?;
    let eta_ml = eta_opt(m, l)?;
    let eta_nl = eta_opt(n, l)?;
    let meas_n = eta_meas_opt(n)?;
    let meas_m = eta_meas_opt(m)?;
    let fid_nm = fidelity_opt(n, m)?;
    let fid_meas_m = fidelity_meas_opt(m)?;

    let mut checks = vec![
        equality("multiplicativity", &(&eta_nm * &eta_ml), &eta_nl),
        at_most("concatenation-bound", &(&eta_nm * &meas_m), &meas_n),
        equality("bound-saturation", &(&eta_nm * &meas_m), &meas_n),
        equality("upper-bound-ratio", &eta_nm, &(&meas_n / &meas_m)),
        at_most("measurement-below-cloning", &meas_m, &eta_ml),
    ];

    let gaps: Vec<(Rational, Rational)> = LIMIT_PROBES
        .iter()
        .map(|&probe| {
            let gap = eta_opt(m, probe.max(m)).map(|e| e - &meas_m)?;
            let scaled = &gap * Rational::from_integer(int(probe.max(m)));
            Ok((gap, scaled))
        })
        .collect::<Result<_>>()?;
    let decays = gaps.iter().all(|(g, _)| g.is_positive())
        && gaps[1].0 < gaps[0].0
        && gaps[0].1 == gaps[1].1;
    checks.push(IdentityCheck {
        name: "limit-decay",
        holds: decays,
        slack: gaps[1].0.clone(),
    });

    checks.push(equality(
        "fidelity-relation",
        &fid_nm,
        &half_one_plus(&eta_nm),
    ));
    checks.push(equality(
        "estimation-fidelity-relation",
        &fid_meas_m,
        &half_one_plus(&meas_m),
    ));

    Ok(BoundsReport {
        n,
        m,
        l,
        eta_opt: eta_nm,
        fidelity_opt: fid_nm,
        eta_meas_opt: meas_m,
        fidelity_meas_opt: fid_meas_m,
        checks,
    })
}

/// Outcome of an exhaustive exact check over a parameter grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSummary {
    pub checked: usize,
    pub failures: Vec<(usize, usize, usize)>,
}

impl GridSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `η(N,M)·η(M,L) = η(N,L)` for every `1 ≤ N ≤ M ≤ L ≤ max`.
pub fn multiplicativity_grid(max: usize, exec: Exec) -> GridSummary {
    let triples: Vec<(usize, usize, usize)> = (1..=max)
        .flat_map(|n| (n..=max).flat_map(move |m| (m..=max).map(move |l| (n, m, l))))
        .collect();
    let ok = exec.map_slice(&triples, |&(n, m, l)| {
        let lhs = eta_opt(n, m).unwrap() * eta_opt(m, l).unwrap();
        lhs == eta_opt(n, l).unwrap()
    });
    GridSummary {
        checked: triples.len(),
        failures: triples
            .iter()
            .zip(ok)
            .filter(|(_, ok)| !ok)
            .map(|(t, _)| *t)
            .collect(),
    }
}

/// `η(N,M)` strictly decreasing in `M` and strictly increasing in `N` over
/// `1 ≤ N ≤ M ≤ max`. Failures are reported as `(N, M, 0)` for the `M`
/// direction and `(N, M, 1)` for the `N` direction.
pub fn monotonicity_grid(max: usize) -> GridSummary {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=max {
        for m in n..=max {
            let here = eta_opt(n, m).unwrap();
            if m < max {
                checked += 1;
                if eta_opt(n, m + 1).unwrap() >= here {
                    failures.push((n, m, 0));
                }
            }
            if n < m {
                checked += 1;
                if eta_opt(n + 1, m).unwrap() <= here {
                    failures.push((n, m, 1));
                }
            }
        }
    }
    GridSummary { checked, failures }
}

/// `η(N,M) > η̄(N)` at every sampled finite `M` (every `M ≤ max_n` plus
/// decades up to 10⁶) for `1 ≤ N ≤ max_n`.
pub fn measurement_below_cloning_grid(max_n: usize) -> GridSummary {
    let decades = [100usize, 1_000, 10_000, 100_000, 1_000_000];
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=max_n {
        let meas = eta_meas_opt(n).unwrap();
        let ms = (n..=max_n).chain(decades.iter().copied().filter(|&d| d >= n));
        for m in ms {
            checked += 1;
            if eta_opt(n, m).unwrap() <= meas {
                failures.push((n, m, 0));
            }
        }
    }
    GridSummary { checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eta_opt_values() {
        assert_eq!(eta_opt(1, 2).unwrap(), q(2, 3));
        assert_eq!(eta_opt(3, 7).unwrap(), q(27, 35));
        for n in 1..10 {
            assert_eq!(eta_opt(n, n).unwrap(), q(1, 1));
        }
        assert!(eta_opt(3, 2).is_err());
        assert!(eta_opt(0, 2).is_err());
    }

    #[test]
    fn fidelity_opt_values() {
        assert_eq!(fidelity_opt(1, 2).unwrap(), q(5, 6));
        assert_eq!(fidelity_opt(2, 6).unwrap(), q(5, 6));
        assert_eq!(fidelity_opt(2, 3).unwrap(), q(11, 12));
        assert_eq!(fidelity_opt(4, 4).unwrap(), q(1, 1));
        assert!(fidelity_opt(5, 4).is_err());
    }

    #[test]
    fn estimation_values() {
        assert_eq!(eta_meas_opt(1).unwrap(), q(1, 3));
        assert_eq!(eta_meas_opt(2).unwrap(), q(1, 2));
        let big = eta_meas_opt(1_000_000).unwrap();
        assert!(big < q(1, 1));
        assert!((to_f64(&big) - 0.999998).abs() < 1e-9);
        assert_eq!(fidelity_meas_opt(1).unwrap(), q(2, 3));
        assert_eq!(fidelity_meas_opt(5).unwrap(), q(6, 7));
        assert!(to_f64(&fidelity_meas_opt(1_000_000_000).unwrap()) > 1.0 - 1e-8);
        assert!(eta_meas_opt(0).is_err());
        assert!(fidelity_meas_opt(0).is_err());
    }

    #[test]
    fn identities_for_small_chains() {
        let r = check_identities(1, 2, 4).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(&eta_opt(1, 2).unwrap() * &eta_meas_opt(2).unwrap(), q(1, 3));
        assert_eq!(eta_opt(1, 4).unwrap(), q(1, 2));

        for n in 1..5 {
            let r = check_identities(n, n, n).unwrap();
            assert!(r.all_hold());
            assert_eq!(r.eta_opt, q(1, 1));
        }
    }

    #[test]
    fn chain_two_three_six_closes_exactly() {
        let r = check_identities(2, 3, 6).unwrap();
        assert_eq!(eta_opt(2, 3).unwrap(), q(5, 6));
        assert_eq!(eta_opt(3, 6).unwrap(), q(4, 5));
        assert_eq!(eta_opt(2, 6).unwrap(), q(2, 3));
        let mult = r
            .checks
            .iter()
            .find(|c| c.name == "multiplicativity")
            .unwrap();
        assert!(mult.holds);
        assert!(mult.slack.is_zero());
    }

    #[test]
    fn limit_gap_is_two_m_over_l_m_plus_two() {
        for m in 1..20 {
            for l in [m, m + 1, 1000, 1_000_000] {
                let gap = eta_opt(m, l).unwrap() - eta_meas_opt(m).unwrap();
                let expected = q(2 * m as i64, (l * (m + 2)) as i64);
                assert_eq!(gap, expected);
            }
        }
    }

    #[test]
    fn identities_reject_bad_ordering() {
        assert!(check_identities(2, 1, 3).is_err());
        assert!(check_identities(1, 3, 2).is_err());
    }

    #[test]
    fn report_values_are_in_unit_interval() {
        for (n, m, l) in [(1, 1, 1), (1, 5, 9), (3, 4, 50)] {
            assert!(check_identities(n, m, l).unwrap().values_in_unit_interval());
        }
    }

    #[test]
    fn cross_check_examples() {
        assert!(cross_check(0.6666666667, &q(2, 3), 1e-9).unwrap());
        assert!(!cross_check(0.67, &q(2, 3), 1e-9).unwrap());
        assert!(cross_check(0.5, &q(1, 2), 0.0).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(to_string(&q(4, 6)), "2/3");
        assert_eq!(to_string(&q(3, 3)), "1");
    }

    #[test]
    fn grids() {
        let g = multiplicativity_grid(12, Exec::Sequential);
        assert!(g.passed());
        assert_eq!(g.checked, 364);
        assert!(monotonicity_grid(20).passed());
        assert!(measurement_below_cloning_grid(20).passed());
    }
}
