//! Placement maps and transmission-by-transmission delivery schedules.
//!
//! Schedules are index-level: a payload entry names the subpacket a stream
//! carries, never its bits. Every builder materializes all transmissions, so
//! they are capped to desk-scale user counts (see [`ScheduleOptions`]).

mod build;
mod flow;
mod validate;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::analytics::{serialize_big, serialize_rational, weighted_dof};
use crate::combinatorics::{binomial, BigCount};
use crate::error::Result;
use crate::model::SubpacketId;

pub use build::{
    build_grouping_schedule, build_min_g_schedule, build_phantom_schedule,
    build_symmetric_schedule, build_symmetric_schedule_on,
};
pub use validate::{validate_schedule, ScheduleCounts, ValidationReport, Violation};

/// Largest user count a builder will materialize unless overridden.
pub const DEFAULT_MAX_USERS: usize = 14;

/// How payload slots are matched to missing subpackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Assignment {
    /// Round-robin over subfile indices; falls back to max-flow if the result
    /// does not cover every missing subpacket.
    #[default]
    Greedy,
    /// Max-flow assignment only.
    Flow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleOptions {
    pub max_users: usize,
    pub assignment: Assignment,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        Self {
            max_users: DEFAULT_MAX_USERS,
            assignment: Assignment::Greedy,
        }
    }
}

/// Which of a multicast transmission's excess subpackets the phantom scheme
/// moves to the unicast phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalPolicy {
    #[default]
    DropLast,
    /// Uniform choice driven by the schedule seed.
    Random,
}

impl std::str::FromStr for RemovalPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "drop-last" => Ok(Self::DropLast),
            "random" | "seeded-random" => Ok(Self::Random),
            other => Err(format!(
                "unknown removal policy {other:?} (expected drop-last or random)"
            )),
        }
    }
}

impl std::fmt::Display for RemovalPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::DropLast => "drop-last",
            Self::Random => "random",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum SchemeTag {
    Symmetric,
    MinG,
    Grouping { group: usize },
    Phantom { policy: RemovalPolicy, seed: u64 },
}

/// Design parameters a schedule was built from; the validator checks the
/// materialized schedule against the closed-form counts these imply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchedulePlan {
    #[serde(flatten)]
    pub scheme: SchemeTag,
    /// Global indices of the users this schedule serves, ascending.
    pub users: Vec<usize>,
    pub tx_antennas: usize,
    pub cache_gain: usize,
    pub omega: usize,
    /// Streams per served user in the reference symmetric design (`β̂` for phantom).
    pub beta: usize,
    /// Virtual antenna count; phantom schedules only.
    pub hat_g: Option<usize>,
    /// `φ`, subpackets per subfile.
    pub subpackets_per_subfile: u64,
}

impl SchedulePlan {
    /// `C(Ω−1, t)`, the number of subfile indices available to each target.
    pub fn subfiles_per_target(&self) -> u64 {
        crate::combinatorics::binomial_u64((self.omega - 1) as u64, self.cache_gain as u64)
            .expect("desk-scale")
    }

    /// `⌈β / C(Ω−1, t)⌉`, the most entries one user may share a subfile index on
    /// inside a single multicast transmission.
    pub fn repetition_bound(&self) -> usize {
        (self.beta as u64).div_ceil(self.subfiles_per_target()) as usize
    }
}

/// Cache contents, held implicitly: user `k` caches `W_P` exactly when `k ∈ P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementMap {
    pub users: Vec<usize>,
    pub cache_gain: usize,
    /// `ϑ = C(K, t)`.
    #[serde(serialize_with = "serialize_big")]
    pub subfiles: BigCount,
    /// `φ`.
    #[serde(serialize_with = "serialize_big")]
    pub subpackets_per_subfile: BigCount,
}

impl PlacementMap {
    pub fn caches(&self, user: usize, subfile: &[usize]) -> bool {
        subfile.contains(&user)
    }

    /// `C(K−1, t−1)` subfiles per file, zero when `t = 0`.
    pub fn cached_subfiles_per_user(&self) -> BigCount {
        if self.cache_gain == 0 {
            return BigCount::default();
        }
        binomial((self.users.len() - 1) as u64, (self.cache_gain - 1) as u64)
    }

    pub fn cached_fraction(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.cached_subfiles_per_user()),
            BigInt::from(self.subfiles.clone()),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TxKind {
    Multicast,
    Unicast,
}

impl std::fmt::Display for TxKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Multicast => "multicast",
            Self::Unicast => "unicast",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserPayload {
    pub user: usize,
    pub subpackets: Vec<SubpacketId>,
}

/// One transmission slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transmission {
    pub kind: TxKind,
    /// 1-based position in the schedule.
    pub index: usize,
    /// Target users, ascending.
    pub targets: Vec<usize>,
    /// One entry per target, in target order.
    pub payload: Vec<UserPayload>,
    #[serde(serialize_with = "serialize_rational")]
    pub stream_size: BigRational,
}

impl Transmission {
    pub fn streams_for(&self, user: usize) -> usize {
        self.payload
            .iter()
            .find(|p| p.user == user)
            .map_or(0, |p| p.subpackets.len())
    }

    pub fn total_streams(&self) -> usize {
        self.payload.iter().map(|p| p.subpackets.len()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = &SubpacketId> {
        self.payload.iter().flat_map(|p| p.subpackets.iter())
    }
}

/// A complete delivery schedule for one user set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub plan: SchedulePlan,
    pub placement: PlacementMap,
    pub transmissions: Vec<Transmission>,
    /// Subpackets moved from multicast to unicast (phantom only), in removal order.
    pub removal_log: Vec<SubpacketId>,
    /// True when every unicast transmission carries exactly `L` streams.
    pub perfect_partition: bool,
}

impl Schedule {
    pub fn multicast_count(&self) -> usize {
        self.transmissions
            .iter()
            .filter(|t| t.kind == TxKind::Multicast)
            .count()
    }

    pub fn unicast_count(&self) -> usize {
        self.transmissions
            .iter()
            .filter(|t| t.kind == TxKind::Unicast)
            .count()
    }

    pub fn total_streams(&self) -> usize {
        self.transmissions.iter().map(|t| t.total_streams()).sum()
    }

    /// DoF achieved by the materialized transmissions, `Σ f(s)·n(s) / Σ f(s)`.
    pub fn realized_dof(&self) -> Result<BigRational> {
        let sizes: Vec<BigRational> = self
            .transmissions
            .iter()
            .map(|t| t.stream_size.clone())
            .collect();
        let streams: Vec<u64> = self
            .transmissions
            .iter()
            .map(|t| t.total_streams() as u64)
            .collect();
        weighted_dof(&sizes, &streams)
    }

    /// Largest number of entries sharing one `(user, subfile)` inside any
    /// single multicast transmission.
    pub fn max_repetition(&self) -> usize {
        self.transmissions
            .iter()
            .filter(|t| t.kind == TxKind::Multicast)
            .flat_map(|t| t.payload.iter())
            .map(|p| {
                let mut subfiles: Vec<&Vec<usize>> =
                    p.subpackets.iter().map(|s| &s.subfile).collect();
                subfiles.sort();
                subfiles
                    .chunk_by(|a, b| a == b)
                    .map(|c| c.len())
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }
}

/// Realized DoF across several schedules played back to back, as in the
/// grouping scheme's orthogonal intervals.
pub fn combined_dof(schedules: &[Schedule]) -> Result<BigRational> {
    let sizes: Vec<BigRational> = schedules
        .iter()
        .flat_map(|s| s.transmissions.iter().map(|t| t.stream_size.clone()))
        .collect();
    let streams: Vec<u64> = schedules
        .iter()
        .flat_map(|s| s.transmissions.iter().map(|t| t.total_streams() as u64))
        .collect();
    weighted_dof(&sizes, &streams)
}
