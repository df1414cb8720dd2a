//! Numerical decodability checks on random channels.
//!
//! Every stream gets a zero-forcing beamformer drawn from the null space of
//! its equivalent interference channel: the stacked combined channels
//! `U_{k'}ᴴ H_{k'}` of the co-scheduled users that neither request the stream
//! nor cache its subfile. A user decodes when foreign streams vanish after its
//! combiner and its own streams form a nonsingular square system.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{SubpacketId, SystemConfig};
use crate::schedule::{Schedule, Transmission, TxKind};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const MAX_REDRAWS: usize = 100;

/// Numerical tolerances; the defaults sit well above double-precision noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Singular values at or below this count as zero when extracting a null space.
    pub null_singular: f64,
    /// Largest accepted `‖H̄ w‖` for a designed beamformer.
    pub null_membership: f64,
    pub residual: f64,
    pub sigma_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            null_singular: 1e-10,
            null_membership: 1e-9,
            residual: 1e-8,
            sigma_min: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CombinerPolicy {
    /// The `β_k` leading left singular vectors of `H_k`.
    #[default]
    LeadingSingular,
    /// A seeded random `G_k × β_k` matrix with orthonormal columns.
    RandomOrthonormal,
}

impl std::str::FromStr for CombinerPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "leading-singular" | "svd" => Ok(Self::LeadingSingular),
            "random-orthonormal" | "random" => Ok(Self::RandomOrthonormal),
            other => Err(format!("unknown combiner policy {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    pub policy: CombinerPolicy,
    pub thresholds: Thresholds,
}

/// One draw of every user's channel matrix `H_k ∈ ℂ^{G_k × L}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub seed: u64,
    pub tx_antennas: usize,
    /// `H_k` at index `k − 1`.
    pub channels: Vec<CMatrix>,
    /// Draws rejected by the conditioning guard.
    pub redraws: usize,
}

impl ChannelRealization {
    pub fn channel(&self, user: usize) -> Result<&CMatrix> {
        user.checked_sub(1)
            .and_then(|i| self.channels.get(i))
            .ok_or_else(|| Error::Domain(format!("no channel for user {user}")))
    }
}

fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * s, im * s)
    })
}

fn min_singular(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// I.i.d. `CN(0, 1)` channels for every user of `cfg`, deterministic in `seed`.
pub fn draw_channels(cfg: &SystemConfig, seed: u64) -> Result<ChannelRealization> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut redraws = 0;
    let mut channels = Vec::with_capacity(cfg.num_users());
    for (i, g) in cfg.antenna_profile().into_iter().enumerate() {
        let mut attempts = 0;
        loop {
            let h = gaussian(&mut rng, g, cfg.tx_antennas);
            let scaled = &h / Complex::from(h.norm());
            if min_singular(&scaled) > 1e-8 {
                channels.push(h);
                break;
            }
            attempts += 1;
            redraws += 1;
            if attempts >= MAX_REDRAWS {
                return Err(Error::Numerical(format!(
                    "seed {seed}: channel of user {} stayed ill-conditioned after {MAX_REDRAWS} draws",
                    i + 1
                )));
            }
        }
    }
    Ok(ChannelRealization {
        seed,
        tx_antennas: cfg.tx_antennas,
        channels,
        redraws,
    })
}

/// Receive combiners `U_k ∈ ℂ^{G_k × β_k}` for the users of one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinerSet {
    pub combiners: BTreeMap<usize, CMatrix>,
}

impl CombinerSet {
    pub fn get(&self, user: usize) -> Result<&CMatrix> {
        self.combiners
            .get(&user)
            .ok_or_else(|| Error::Domain(format!("no combiner for user {user}")))
    }
}

pub fn build_combiners(
    tx: &Transmission,
    channels: &ChannelRealization,
    policy: CombinerPolicy,
) -> Result<CombinerSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(channels.seed ^ (tx.index as u64).rotate_left(32));
    let mut combiners = BTreeMap::new();
    for p in &tx.payload {
        let h = channels.channel(p.user)?;
        let beta = p.subpackets.len();
        if beta > h.nrows().min(h.ncols()) {
            return Err(Error::Domain(format!(
                "user {} receives {beta} streams but its channel has rank at most {}",
                p.user,
                h.nrows().min(h.ncols())
            )));
        }
        let u = match policy {
            CombinerPolicy::LeadingSingular => {
                let svd = h.clone().svd(true, false);
                let u = svd
                    .u
                    .ok_or_else(|| Error::Numerical("SVD returned no U".into()))?;
                u.columns(0, beta).into_owned()
            }
            CombinerPolicy::RandomOrthonormal => {
                let a = gaussian(&mut rng, h.nrows(), beta);
                a.qr().q().columns(0, beta).into_owned()
            }
        };
        combiners.insert(p.user, u);
    }
    Ok(CombinerSet { combiners })
}

/// Users whose combined channels a stream for `user` with subfile `subfile` must avoid.
fn interferers(tx: &Transmission, user: usize, subfile: &[usize]) -> Result<Vec<usize>> {
    if !tx.targets.contains(&user) {
        return Err(Error::Domain(format!(
            "user {user} is not a target of transmission {}",
            tx.index
        )));
    }
    if subfile
        .iter()
        .any(|u| *u == user || !tx.targets.contains(u))
    {
        return Err(Error::Domain(format!(
            "subfile {subfile:?} is not a subset of the targets {:?} without user {user}",
            tx.targets
        )));
    }
    Ok(tx
        .targets
        .iter()
        .copied()
        .filter(|u| *u != user && !subfile.contains(u))
        .collect())
}

fn stacked_channel(
    others: &[usize],
    tx_antennas: usize,
    channels: &ChannelRealization,
    combiners: &CombinerSet,
) -> Result<CMatrix> {
    let mut blocks = Vec::with_capacity(others.len());
    for &u in others {
        blocks.push(combiners.get(u)?.adjoint() * channels.channel(u)?);
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, tx_antennas);
    let mut r = 0;
    for b in blocks {
        out.rows_mut(r, b.nrows()).copy_from(&b);
        r += b.nrows();
    }
    Ok(out)
}

/// `H̄_{P,k}`: rows `U_{k'}ᴴ H_{k'}` for `k' ∈ K(s) \ (P ∪ {k})`, ascending in `k'`.
/// Unicast transmissions use `P = ∅`.
pub fn equivalent_interference_channel(
    tx: &Transmission,
    user: usize,
    subfile: &[usize],
    channels: &ChannelRealization,
    combiners: &CombinerSet,
) -> Result<CMatrix> {
    let others = interferers(tx, user, subfile)?;
    stacked_channel(&others, channels.tx_antennas, channels, combiners)
}

/// Orthonormal basis of `{w : m w = 0}`, one column per zero singular value.
pub fn null_space_basis(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Ok(CMatrix::identity(n, n));
    }
    let mut padded = CMatrix::zeros(m.nrows().max(n), n);
    padded.rows_mut(0, m.nrows()).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD returned no Vᴴ".into()))?;
    let v = v_t.adjoint();
    let keep: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= tol).collect();
    let mut basis = CMatrix::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &v.column(i));
    }
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub id: SubpacketId,
    pub w: CVector,
    /// `‖H̄ w‖`.
    pub null_residual: f64,
}

/// Beamformers of one transmission, in payload order.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    pub beamformers: Vec<Beamformer>,
}

fn nulling_subfile(tx: &Transmission, id: &SubpacketId) -> Vec<usize> {
    match tx.kind {
        TxKind::Multicast => id.subfile.clone(),
        TxKind::Unicast => Vec::new(),
    }
}

/// Streams sharing one nulling target: `(transmit slots, interferers)`.
type NullingGroup = (Vec<usize>, Vec<usize>);

/// Checks the exact rank-nullity bound for every nulling group first, then
/// assigns each group's entries distinct null-space basis columns.
pub fn design_beamformers(
    tx: &Transmission,
    channels: &ChannelRealization,
    combiners: &CombinerSet,
    thresholds: &Thresholds,
) -> Result<BeamformerSet> {
    let streams: BTreeMap<usize, usize> = tx
        .payload
        .iter()
        .map(|p| (p.user, p.subpackets.len()))
        .collect();
    let mut groups: BTreeMap<(usize, Vec<usize>), NullingGroup> = BTreeMap::new();
    let mut slot = 0;
    for p in &tx.payload {
        for id in &p.subpackets {
            let subfile = nulling_subfile(tx, id);
            let others = interferers(tx, p.user, &subfile)?;
            groups
                .entry((p.user, others))
                .or_insert_with(|| (subfile, Vec::new()))
                .1
                .push(slot);
            slot += 1;
        }
    }

    let l = channels.tx_antennas as i64;
    for ((user, others), (subfile, slots)) in &groups {
        let nullity = l - others.iter().map(|u| streams[u] as i64).sum::<i64>();
        if nullity < slots.len() as i64 {
            return Err(Error::Feasibility {
                user: *user,
                subfile: subfile.clone(),
                nullity,
                required: slots.len(),
            });
        }
    }

    let ids: Vec<&SubpacketId> = tx.entries().collect();
    let mut out: Vec<Option<Beamformer>> = vec![None; ids.len()];
    for ((user, others), (subfile, slots)) in &groups {
        let h_bar = stacked_channel(others, channels.tx_antennas, channels, combiners)?;
        let basis = null_space_basis(&h_bar, thresholds.null_singular)?;
        let expected = channels.tx_antennas - h_bar.nrows();
        if basis.ncols() != expected {
            return Err(Error::Numerical(format!(
                "transmission {}, user {user}, subfile {subfile:?}: measured nullity {} differs from {expected}",
                tx.index,
                basis.ncols()
            )));
        }
        for (col, &s) in slots.iter().enumerate() {
            let w = basis.column(col).into_owned();
            let null_residual = if h_bar.nrows() == 0 {
                0.0
            } else {
                (&h_bar * &w).norm()
            };
            if null_residual > thresholds.null_membership {
                return Err(Error::Numerical(format!(
                    "transmission {}: beamformer for {} leaves ‖H̄w‖ = {null_residual:e}",
                    tx.index, ids[s]
                )));
            }
            out[s] = Some(Beamformer {
                id: ids[s].clone(),
                w,
                null_residual,
            });
        }
    }
    Ok(BeamformerSet {
        beamformers: out
            .into_iter()
            .map(|b| b.expect("every slot grouped"))
            .collect(),
    })
}

/// Per-user outcome of one transmission under one channel draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserReport {
    pub seed: u64,
    #[serde(rename = "s")]
    pub tx: usize,
    pub kind: TxKind,
    pub user: usize,
    #[serde(rename = "beta_k")]
    pub streams: usize,
    pub residual: f64,
    pub sigma_min: f64,
    pub decodable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionReport {
    pub index: usize,
    pub users: Vec<UserReport>,
}

impl TransmissionReport {
    pub fn decodable(&self) -> bool {
        self.users.iter().all(|u| u.decodable)
    }
}

pub fn verify_transmission(
    tx: &Transmission,
    channels: &ChannelRealization,
    opts: &VerifyOptions,
) -> Result<TransmissionReport> {
    let combiners = build_combiners(tx, channels, opts.policy)?;
    let bf = design_beamformers(tx, channels, &combiners, &opts.thresholds)?;
    let mut users = Vec::with_capacity(tx.payload.len());
    for p in &tx.payload {
        let k = p.user;
        let g = combiners.get(k)?.adjoint() * channels.channel(k)?;
        let mut residual: f64 = 0.0;
        let mut own = Vec::new();
        for b in &bf.beamformers {
            if b.id.user == k {
                own.push(b.w.clone());
            } else if tx.kind == TxKind::Unicast || !b.id.subfile.contains(&k) {
                residual = residual.max((&g * &b.w).norm() / b.w.norm());
            }
        }
        let sigma_min = if own.is_empty() {
            0.0
        } else {
            min_singular(&(&g * CMatrix::from_columns(&own)))
        };
        users.push(UserReport {
            seed: channels.seed,
            tx: tx.index,
            kind: tx.kind,
            user: k,
            streams: p.subpackets.len(),
            residual,
            sigma_min,
            decodable: residual <= opts.thresholds.residual
                && sigma_min >= opts.thresholds.sigma_min,
        });
    }
    Ok(TransmissionReport {
        index: tx.index,
        users,
    })
}

/// A transmission that could not be verified at all.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TxFailure {
    pub seed: u64,
    pub tx: usize,
    pub message: String,
}

/// Aggregate over every transmission and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seeds: Vec<u64>,
    pub rows: Vec<UserReport>,
    pub failures: Vec<TxFailure>,
    pub checked: usize,
    pub decodable: usize,
    pub pass_rate: f64,
    pub worst_residual: f64,
    pub worst_sigma_min: f64,
    pub redraws: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0 && self.decodable == self.checked
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)
                .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

pub fn verify_schedule(
    sch: &Schedule,
    cfg: &SystemConfig,
    seeds: &[u64],
) -> Result<VerificationReport> {
    verify_schedules(
        std::slice::from_ref(sch),
        cfg,
        seeds,
        &VerifyOptions::default(),
    )
}

/// Verifies several schedules (e.g. the grouping scheme's intervals) on shared
/// channel draws. Feasibility and numerical failures are recorded per
/// transmission; the pass rate covers the transmissions that could be checked.
pub fn verify_schedules(
    schedules: &[Schedule],
    cfg: &SystemConfig,
    seeds: &[u64],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        seeds: seeds.to_vec(),
        rows: Vec::new(),
        failures: Vec::new(),
        checked: 0,
        decodable: 0,
        pass_rate: 0.0,
        worst_residual: 0.0,
        worst_sigma_min: f64::INFINITY,
        redraws: 0,
    };
    for &seed in seeds {
        let channels = draw_channels(cfg, seed)?;
        report.redraws += channels.redraws;
        for tx in schedules.iter().flat_map(|s| s.transmissions.iter()) {
            match verify_transmission(tx, &channels, opts) {
                Ok(r) => {
                    report.checked += 1;
                    if r.decodable() {
                        report.decodable += 1;
                    }
                    for u in &r.users {
                        report.worst_residual = report.worst_residual.max(u.residual);
                        report.worst_sigma_min = report.worst_sigma_min.min(u.sigma_min);
                    }
                    report.rows.extend(r.users);
                }
                Err(e @ (Error::Feasibility { .. } | Error::Numerical(_) | Error::Domain(_))) => {
                    report.failures.push(TxFailure {
                        seed,
                        tx: tx.index,
                        message: e.to_string(),
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    if report.checked > 0 {
        report.pass_rate = report.decodable as f64 / report.checked as f64;
    }
    Ok(report)
}
