//! Integer design search for `(Ω, β)` under the linear-decodability stream bound.
//!
//! A design serving `Ω` users with `β` streams each at coded-caching gain `t` is
//! feasible when
//!
//! ```text
//! β ≤ G   and   β ≤ (L − (Ω − t − 1)·β) · C(Ω − 1, t)
//! ```
//!
//! which is the cross-multiplied form of
//! `β ≤ L·C(Ω−1,t) / (1 + (Ω−t−1)·C(Ω−1,t))`. Keeping it cross-multiplied lets
//! the check run on exact big integers without dividing huge binomials.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::analytics::{phantom_design, PhantomDesign};
use crate::combinatorics::{binomial, BigCount};
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Feasibility of serving `omega` users with `beta` streams each.
pub fn is_feasible(
    omega: usize,
    beta: usize,
    t: usize,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<bool> {
    if omega <= t {
        return Err(Error::Domain(format!(
            "Ω = {omega} must exceed the caching gain t = {t}"
        )));
    }
    if beta == 0 {
        return Err(Error::Domain("β must be at least 1".into()));
    }
    if beta > rx_antennas {
        return Ok(false);
    }
    // L − (Ω − t − 1)·β, which may go negative
    let spare = tx_antennas as i128 - ((omega - t - 1) as i128) * beta as i128;
    if spare <= 0 {
        return Ok(false);
    }
    let rhs = BigUint::from(spare as u128) * binomial((omega - 1) as u64, t as u64);
    Ok(BigUint::from(beta) <= rhs)
}

/// A symmetric `(Ω, β)` design and its DoF `Ω·β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricDesign {
    pub omega: usize,
    pub beta: usize,
    #[serde(serialize_with = "crate::analytics::serialize_big")]
    pub dof: BigCount,
}

/// Exhaustive search over `Ω ∈ [t+1, K_eff]`, `β ∈ [1, G]` maximizing `Ω·β`.
///
/// Ties go to the larger `Ω`, then the larger `β`.
pub fn solve_symmetric(
    k_eff: usize,
    t: usize,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<SymmetricDesign> {
    if t + 1 > k_eff {
        return Err(Error::Domain(format!(
            "no multicast group exists: t + 1 = {} exceeds K = {k_eff}",
            t + 1
        )));
    }
    if tx_antennas == 0 || rx_antennas == 0 {
        return Err(Error::Domain("antenna counts must be positive".into()));
    }
    let mut best: Option<(usize, usize)> = None;
    for omega in t + 1..=k_eff {
        let mut any = false;
        for beta in 1..=rx_antennas {
            if !is_feasible(omega, beta, t, tx_antennas, rx_antennas)? {
                continue;
            }
            any = true;
            let better = match best {
                None => true,
                Some((bo, bb)) => (omega * beta, omega, beta) > (bo * bb, bo, bb),
            };
            if better {
                best = Some((omega, beta));
            }
        }
        // β = 1 infeasible at Ω means every larger Ω is infeasible too
        if !any {
            break;
        }
    }
    let (omega, beta) = best.ok_or_else(|| {
        Error::Internal(format!(
            "no feasible design for K={k_eff}, t={t}, L={tx_antennas}, G={rx_antennas}"
        ))
    })?;
    Ok(SymmetricDesign {
        omega,
        beta,
        dof: BigCount::from(omega * beta),
    })
}

/// One evaluated `(Ĝ, Ω̂, β̂)` cell of the phantom design grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub hat_g: usize,
    pub omega: usize,
    pub beta: usize,
    /// `None` marks an infeasible cell.
    #[serde(serialize_with = "crate::analytics::serialize_opt_rational")]
    pub dof: Option<BigRational>,
}

impl GridCell {
    pub fn is_feasible(&self) -> bool {
        self.dof.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct PhantomSearch {
    pub best: PhantomDesign,
    pub grid: Vec<GridCell>,
}

impl PhantomSearch {
    pub fn cell(&self, hat_g: usize, omega: usize, beta: usize) -> Option<&GridCell> {
        self.grid
            .iter()
            .find(|c| c.hat_g == hat_g && c.omega == omega && c.beta == beta)
    }
}

/// Evaluates the phantom grid for the given `Ĝ` values over `Ω̂ ∈ [t+1, K]`,
/// `β̂ ∈ [1, Ĝ]`. Every `Ĝ` must lie in `[G_(1), G_(J)]`.
pub fn phantom_grid(cfg: &SystemConfig, hat_g_values: &[usize]) -> Result<Vec<GridCell>> {
    Ok(phantom_grid_designs(cfg, hat_g_values)?
        .into_iter()
        .map(|(cell, _)| cell)
        .collect())
}

fn phantom_grid_designs(
    cfg: &SystemConfig,
    hat_g_values: &[usize],
) -> Result<Vec<(GridCell, Option<PhantomDesign>)>> {
    cfg.validate(false)?;
    let k = cfg.num_users();
    let t = cfg.cache_gain().expect("validated");
    let mut cells = Vec::new();
    for &hat_g in hat_g_values {
        for beta in 1..=hat_g {
            for omega in t + 1..=k {
                let design = if is_feasible(omega, beta, t, cfg.tx_antennas, hat_g)? {
                    Some(phantom_design(cfg, hat_g, omega, beta)?)
                } else {
                    None
                };
                let cell = GridCell {
                    hat_g,
                    omega,
                    beta,
                    dof: design.as_ref().map(|d| d.dof.clone()),
                };
                cells.push((cell, design));
            }
        }
    }
    Ok(cells)
}

/// Best phantom design over `Ĝ ∈ {G_(1), …, G_(J)}` plus the full grid.
///
/// Ranking: larger DoF, then fewer total transmissions `S_MC + S_UC`, then
/// larger `Ω̂`, larger `β̂`, and finally smaller `Ĝ`.
pub fn solve_phantom(cfg: &SystemConfig) -> Result<PhantomSearch> {
    cfg.validate(false)?;
    let hat_gs: Vec<usize> = cfg.groups.iter().map(|g| g.rx_antennas).collect();
    let cells = phantom_grid_designs(cfg, &hat_gs)?;
    let mut best: Option<PhantomDesign> = None;
    let mut grid = Vec::with_capacity(cells.len());
    for (cell, design) in cells {
        if let Some(d) = design {
            if best.as_ref().is_none_or(|b| outranks(&d, b)) {
                best = Some(d);
            }
        }
        grid.push(cell);
    }
    let best = best.ok_or_else(|| Error::Internal("phantom grid has no feasible cell".into()))?;
    Ok(PhantomSearch { best, grid })
}

fn outranks(a: &PhantomDesign, b: &PhantomDesign) -> bool {
    use std::cmp::Ordering::*;
    match a.dof.cmp(&b.dof) {
        Greater => return true,
        Less => return false,
        Equal => {}
    }
    let sa = &a.counts.s_mc + &a.counts.s_uc;
    let sb = &b.counts.s_mc + &b.counts.s_uc;
    match sa.cmp(&sb) {
        Less => return true,
        Greater => return false,
        Equal => {}
    }
    (a.omega, a.beta, std::cmp::Reverse(a.hat_g)) > (b.omega, b.beta, std::cmp::Reverse(b.hat_g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::render_dof;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    /// Brute force over the ratio form `β ≤ min(G, L·C / (1 + (Ω−t−1)·C))`.
    fn oracle(k: usize, t: usize, l: usize, g: usize) -> (usize, usize) {
        let mut best = (0, 0);
        for omega in t + 1..=k {
            let c = BigInt::from(binomial((omega - 1) as u64, t as u64));
            let bound = BigRational::new(
                BigInt::from(l) * &c,
                BigInt::one() + BigInt::from(omega - t - 1) * &c,
            );
            for beta in 1..=g {
                if BigRational::from_integer(BigInt::from(beta)) <= bound {
                    let key = (omega * beta, omega, beta);
                    if key > (best.0 * best.1, best.0, best.1) {
                        best = (omega, beta);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(10, 2, 4, 12, 2).unwrap());
        assert!(is_feasible(4, 2, 2, 4, 2).unwrap());
        assert!(!is_feasible(5, 2, 2, 4, 2).unwrap());
        assert!(is_feasible(8, 3, 4, 12, 4).unwrap());
        assert!(!is_feasible(9, 3, 4, 12, 4).unwrap());
        assert!(!is_feasible(2, 3, 1, 12, 2).unwrap());
        assert!(matches!(is_feasible(4, 1, 4, 12, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn symmetric_examples() {
        let d = solve_symmetric(100, 4, 12, 2).unwrap();
        assert_eq!(
            (d.omega, d.beta, d.dof.clone()),
            (10, 2, BigCount::from(20u32))
        );
        let d = solve_symmetric(10, 2, 4, 2).unwrap();
        assert_eq!((d.omega, d.beta), (4, 2));
        let d = solve_symmetric(5, 1, 4, 4).unwrap();
        assert_eq!((d.omega, d.beta), (2, 4));
        assert_eq!(d.dof, BigCount::from(8u32));
    }

    #[test]
    fn symmetric_rejects_degenerate_group() {
        assert!(matches!(solve_symmetric(3, 3, 4, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn phantom_table_cells() {
        let cfg = SystemConfig::from_parts(12, "0.04", &[(25, 2), (75, 4)]).unwrap();
        let search = solve_phantom(&cfg).unwrap();
        assert_eq!(
            (search.best.hat_g, search.best.omega, search.best.beta),
            (4, 7, 4)
        );
        assert_eq!(render_dof(&search.best.dof), "21.68");
        assert!(!search.cell(4, 8, 4).unwrap().is_feasible());
        assert_eq!(
            search.cell(2, 10, 2).unwrap().dof,
            Some(BigRational::from_integer(20.into()))
        );
    }

    #[test]
    fn phantom_large_tables() {
        let cfg = SystemConfig::from_parts(12, "0.1", &[(10, 2), (490, 4)]).unwrap();
        assert_eq!(render_dof(&solve_phantom(&cfg).unwrap().best.dof), "180.17");
        let cfg = SystemConfig::from_parts(12, "0.1", &[(60, 2), (440, 4)]).unwrap();
        let best = solve_phantom(&cfg).unwrap().best;
        assert_eq!(best.dof, BigRational::from_integer(112.into()));
    }

    #[test]
    fn grid_marks_infeasible_cells() {
        let cfg = SystemConfig::from_parts(4, "0.2", &[(5, 2), (5, 4)]).unwrap();
        let grid = phantom_grid(&cfg, &[3]).unwrap();
        // Ĝ = 3 sits between the two group values
        assert_eq!(grid.len(), 3 * 8);
        assert!(grid.iter().any(|c| !c.is_feasible()));
        assert!(grid
            .iter()
            .all(|c| c.dof.as_ref().is_none_or(|d| *d > BigRational::zero())));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn monotone_in_omega(t in 0usize..=6, extra in 1usize..20, beta in 1usize..=8, l in 1usize..=16, g in 1usize..=8) {
            let omega = t + extra;
            if !is_feasible(omega, beta, t, l, g).unwrap() {
                prop_assert!(!is_feasible(omega + 1, beta, t, l, g).unwrap());
            }
        }

        #[test]
        fn baseline_multicast_lower_bound(k in 2usize..=30, t in 0usize..=6, l in 1usize..=16, g in 1usize..=8) {
            prop_assume!(t < k);
            let d = solve_symmetric(k, t, l, g).unwrap();
            prop_assert!(d.dof >= BigCount::from(t + 1));
        }
    }

    #[test]
    fn matches_ratio_form_oracle_exhaustively() {
        for k in 1..=30 {
            for t in 0..=6 {
                if t + 1 > k {
                    continue;
                }
                for l in 1..=16 {
                    for g in 1..=8 {
                        let d = solve_symmetric(k, t, l, g).unwrap();
                        assert_eq!(
                            (d.omega, d.beta),
                            oracle(k, t, l, g),
                            "K={k} t={t} L={l} G={g}"
                        );
                    }
                }
            }
        }
    }
}
