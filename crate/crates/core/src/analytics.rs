//! Closed-form DoF evaluation for the min-G, grouping and phantom schemes.
//!
//! All arithmetic here is exact. DoF values are [`BigRational`]s and counts are
//! [`BigCount`]s; floating point only appears when a value is rendered.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial, BigCount};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::optimizer::{is_feasible, solve_symmetric};

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

/// Renders a DoF value with two decimals, rounding half away from zero.
pub fn render_dof(value: &BigRational) -> String {
    let hundredths = (value * ratio(100, 1)).round().to_integer();
    let sign = if hundredths.is_negative() { "-" } else { "" };
    let (whole, frac) = hundredths.abs().div_rem(&BigInt::from(100));
    format!("{sign}{whole}.{frac:0>2}")
}

/// Exact `p/q` text form (`q` omitted for integers).
pub fn exact_string(value: &BigRational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn serialize_rational<S: Serializer>(
    value: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&exact_string(value))
}

pub(crate) fn serialize_opt_rational<S: Serializer>(
    value: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.collect_str(&exact_string(v)),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_big<S: Serializer>(
    value: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Weighted DoF `Σ f(s)·n(s) / Σ f(s)`, where `n(s)` is the total number of
/// streams carried by transmission `s` and `f(s)` its stream size.
pub fn weighted_dof(stream_sizes: &[BigRational], streams_per_tx: &[u64]) -> Result<BigRational> {
    if stream_sizes.is_empty() || stream_sizes.len() != streams_per_tx.len() {
        return Err(Error::Domain(format!(
            "need equal, nonempty lists (got {} stream sizes and {} stream counts)",
            stream_sizes.len(),
            streams_per_tx.len()
        )));
    }
    let mut weighted = BigRational::zero();
    let mut total = BigRational::zero();
    for (f, &n) in stream_sizes.iter().zip(streams_per_tx) {
        if !f.is_positive() {
            return Err(Error::Domain(format!("stream size {f} is not positive")));
        }
        weighted += f * ratio(n, 1);
        total += f;
    }
    Ok(weighted / total)
}

/// Design and counts of the min-G scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinGPlan {
    /// `Ǧ = min_k G_k`.
    pub check_g: usize,
    pub cache_gain: usize,
    pub omega: usize,
    pub beta: usize,
    #[serde(serialize_with = "serialize_big")]
    pub subfiles: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub subpackets_per_subfile: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub transmissions: BigCount,
    #[serde(serialize_with = "serialize_rational")]
    pub dof: BigRational,
}

/// Subfile count `C(K, t)`, subpackets per subfile `C(K−t−1, Ω−t−1)·β`, and
/// transmission count `C(K, Ω)·C(Ω−1, t)` of a symmetric delivery.
pub(crate) fn symmetric_counts(
    k: usize,
    t: usize,
    omega: usize,
    beta: usize,
) -> (BigCount, BigCount, BigCount) {
    let subfiles = binomial(k as u64, t as u64);
    let phi = binomial((k - t - 1) as u64, (omega - t - 1) as u64) * big(beta);
    let s = binomial(k as u64, omega as u64) * binomial((omega - 1) as u64, t as u64);
    (subfiles, phi, s)
}

pub fn dof_min_g(cfg: &SystemConfig) -> Result<MinGPlan> {
    cfg.validate(false)?;
    let k = cfg.num_users();
    let t = cfg.cache_gain().expect("validated");
    let check_g = cfg.min_rx_antennas().expect("validated");
    let design = solve_symmetric(k, t, cfg.tx_antennas, check_g)?;
    let (subfiles, subpackets_per_subfile, transmissions) =
        symmetric_counts(k, t, design.omega, design.beta);
    Ok(MinGPlan {
        check_g,
        cache_gain: t,
        omega: design.omega,
        beta: design.beta,
        subfiles,
        subpackets_per_subfile,
        transmissions,
        dof: ratio(design.omega * design.beta, 1),
    })
}

/// One group's symmetric design inside the grouping scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPlan {
    pub size: usize,
    pub rx_antennas: usize,
    pub cache_gain: usize,
    pub omega: usize,
    pub beta: usize,
    #[serde(serialize_with = "serialize_big")]
    pub subfiles: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub subpackets_per_subfile: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub transmissions: BigCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupingPlan {
    pub groups: Vec<GroupPlan>,
    #[serde(serialize_with = "serialize_rational")]
    pub dof: BigRational,
}

/// Grouping scheme: each group gets its own symmetric design and an orthogonal
/// delivery interval, giving `DoF = 1 / Σ_j (K_(j)/K) / (Ω_(j)·β_(j))`.
pub fn dof_grouping(cfg: &SystemConfig) -> Result<GroupingPlan> {
    cfg.validate(true)?;
    let k = cfg.num_users();
    let mut groups = Vec::with_capacity(cfg.groups.len());
    let mut inverse = BigRational::zero();
    for (j, g) in cfg.groups.iter().enumerate() {
        let t = cfg.group_cache_gain(j).expect("validated");
        if t + 1 > g.size {
            return Err(Error::Domain(format!(
                "group {}: K_(j)·γ + 1 = {} exceeds the group size {}",
                j + 1,
                t + 1,
                g.size
            )));
        }
        let d = solve_symmetric(g.size, t, cfg.tx_antennas, g.rx_antennas)?;
        let (subfiles, subpackets_per_subfile, transmissions) =
            symmetric_counts(g.size, t, d.omega, d.beta);
        inverse += ratio(g.size, k * d.omega * d.beta);
        groups.push(GroupPlan {
            size: g.size,
            rx_antennas: g.rx_antennas,
            cache_gain: t,
            omega: d.omega,
            beta: d.beta,
            subfiles,
            subpackets_per_subfile,
            transmissions,
        });
    }
    Ok(GroupingPlan {
        groups,
        dof: inverse.recip(),
    })
}

/// Subpacket and transmission counts of a phantom design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhantomCounts {
    /// All missing subpackets.
    #[serde(serialize_with = "serialize_big")]
    pub z: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub z_mc: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub z_uc: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub s_mc: BigCount,
    /// `⌈Z_UC / L⌉`.
    #[serde(serialize_with = "serialize_big")]
    pub s_uc: BigCount,
    /// Whether `L` divides `Z_UC`, so every unicast slot can be full.
    pub perfect_partition: bool,
}

/// A phantom design `(Ĝ, Ω̂, β̂)` with its counts and DoF.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhantomDesign {
    pub hat_g: usize,
    pub omega: usize,
    pub beta: usize,
    /// `β_(j) = min(G_(j), β̂)` per group.
    pub group_streams: Vec<usize>,
    /// 1-based indices of groups with `G_(j) < Ĝ`.
    pub hat_j: Vec<usize>,
    pub counts: PhantomCounts,
    /// Idealized DoF assuming every unicast slot carries `L` streams.
    #[serde(serialize_with = "serialize_rational")]
    pub dof: BigRational,
    /// `Z / (S_MC + ⌈Z_UC/L⌉)`; equals `dof` whenever `L | Z_UC`.
    #[serde(serialize_with = "serialize_rational")]
    pub dof_ceiling: BigRational,
}

impl PhantomDesign {
    /// `β_k = min(G_k, β̂)`.
    pub fn streams_for(&self, rx_antennas: usize) -> usize {
        rx_antennas.min(self.beta)
    }
}

fn check_phantom_params(
    cfg: &SystemConfig,
    hat_g: usize,
    omega: usize,
    beta: usize,
) -> Result<usize> {
    cfg.validate(false)?;
    let t = cfg.cache_gain().expect("validated");
    let lo = cfg.groups.first().map(|g| g.rx_antennas).unwrap_or(0);
    let hi = cfg.groups.last().map(|g| g.rx_antennas).unwrap_or(0);
    if hat_g < lo || hat_g > hi {
        return Err(Error::Domain(format!(
            "Ĝ = {hat_g} lies outside [{lo}, {hi}]"
        )));
    }
    if omega > cfg.num_users() {
        return Err(Error::Domain(format!(
            "Ω̂ = {omega} exceeds the number of users {}",
            cfg.num_users()
        )));
    }
    if !is_feasible(omega, beta, t, cfg.tx_antennas, hat_g)? {
        return Err(Error::Infeasible(format!(
            "(Ĝ={hat_g}, Ω̂={omega}, β̂={beta}) violates the linear-decodability bound"
        )));
    }
    Ok(t)
}

/// `Σ_{j∈Ĵ} (β̂ − β_(j))·K_(j)`.
fn deficit(cfg: &SystemConfig, hat_g: usize, beta: usize) -> usize {
    cfg.groups
        .iter()
        .filter(|g| g.rx_antennas < hat_g)
        .map(|g| (beta - g.rx_antennas.min(beta)) * g.size)
        .sum()
}

pub fn phantom_counts(
    cfg: &SystemConfig,
    hat_g: usize,
    omega: usize,
    beta: usize,
) -> Result<PhantomCounts> {
    let t = check_phantom_params(cfg, hat_g, omega, beta)?;
    let k = cfg.num_users();
    // every user sits in C(K−1, Ω̂−1)·C(Ω̂−1, t) multicast transmissions
    let appearances =
        binomial((k - 1) as u64, (omega - 1) as u64) * binomial((omega - 1) as u64, t as u64);
    let z = &appearances * big(k * beta);
    let delivered: usize = cfg
        .groups
        .iter()
        .map(|g| g.rx_antennas.min(beta) * g.size)
        .sum();
    let z_mc = &appearances * big(delivered);
    let z_uc = &z - &z_mc;
    debug_assert_eq!(z_uc, &appearances * big(deficit(cfg, hat_g, beta)));
    let s_mc = binomial(k as u64, omega as u64) * binomial((omega - 1) as u64, t as u64);
    let (s_uc, rem) = z_uc.div_rem(&big(cfg.tx_antennas));
    let perfect_partition = rem.is_zero();
    let s_uc = if perfect_partition {
        s_uc
    } else {
        s_uc + BigUint::one()
    };
    Ok(PhantomCounts {
        z,
        z_mc,
        z_uc,
        s_mc,
        s_uc,
        perfect_partition,
    })
}

/// `Ω̂β̂KL / (KL + Ω̂·Σ_{j∈Ĵ}(β̂ − β_(j))·K_(j))`.
fn phantom_closed_form(cfg: &SystemConfig, hat_g: usize, omega: usize, beta: usize) -> BigRational {
    let kl = cfg.num_users() * cfg.tx_antennas;
    ratio(
        big(omega * beta) * big(kl),
        big(kl) + big(omega) * big(deficit(cfg, hat_g, beta)),
    )
}

/// Phantom DoF in closed form, cross-checked against `Z / (S_MC + Z_UC/L)`
/// from the materialized counts when `L | Z_UC`.
pub fn dof_phantom(
    cfg: &SystemConfig,
    hat_g: usize,
    omega: usize,
    beta: usize,
) -> Result<BigRational> {
    Ok(phantom_design(cfg, hat_g, omega, beta)?.dof)
}

pub fn phantom_design(
    cfg: &SystemConfig,
    hat_g: usize,
    omega: usize,
    beta: usize,
) -> Result<PhantomDesign> {
    let counts = phantom_counts(cfg, hat_g, omega, beta)?;
    let dof = phantom_closed_form(cfg, hat_g, omega, beta);
    let z = BigInt::from(counts.z.clone());
    let l = BigInt::from(cfg.tx_antennas);
    let idealized = BigRational::new(
        &z * &l,
        BigInt::from(counts.s_mc.clone()) * &l + BigInt::from(counts.z_uc.clone()),
    );
    if idealized != dof {
        return Err(Error::Internal(format!(
            "phantom DoF mismatch: closed form {} vs counts {}",
            exact_string(&dof),
            exact_string(&idealized)
        )));
    }
    let dof_ceiling = BigRational::new(z, BigInt::from(&counts.s_mc + &counts.s_uc));
    let group_streams = cfg.groups.iter().map(|g| g.rx_antennas.min(beta)).collect();
    let hat_j = cfg
        .groups
        .iter()
        .enumerate()
        .filter(|(_, g)| g.rx_antennas < hat_g)
        .map(|(j, _)| j + 1)
        .collect();
    Ok(PhantomDesign {
        hat_g,
        omega,
        beta,
        group_streams,
        hat_j,
        counts,
        dof,
        dof_ceiling,
    })
}
