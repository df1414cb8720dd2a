//! Independent checks of a materialized schedule against its plan.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{Schedule, SchemeTag, TxKind};
use crate::combinatorics::{binomial_u64, enumerate_subsets};
use crate::error::{Error, Result};
use crate::model::{SubpacketId, SystemConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A subpacket is delivered more than once.
    Duplicate {
        id: SubpacketId,
        count: usize,
    },
    /// A missing subpacket is never delivered.
    Missing {
        id: SubpacketId,
    },
    /// An entry names a subpacket the user does not need or that does not exist.
    Unexpected {
        tx: usize,
        id: SubpacketId,
    },
    /// A multicast entry's subfile is not a subset of `T \ {k}`.
    SubfileOutsideTargets {
        tx: usize,
        id: SubpacketId,
    },
    /// Payload users disagree with the target list, or an entry sits under the wrong user.
    PayloadMismatch {
        tx: usize,
    },
    StreamCount {
        tx: usize,
        user: usize,
        expected: usize,
        found: usize,
    },
    /// A unicast transmission carries more than `L` streams.
    TxOverload {
        tx: usize,
        streams: usize,
        cap: usize,
    },
    Repetition {
        tx: usize,
        user: usize,
        subfile: Vec<usize>,
        count: usize,
        bound: usize,
    },
    BadIndex {
        position: usize,
        index: usize,
    },
    Count {
        what: &'static str,
        expected: u64,
        found: u64,
    },
    /// Removed entries and unicast entries are not the same multiset.
    RemovalLog,
    PerfectPartitionFlag {
        flagged: bool,
        actual: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleCounts {
    pub multicast: usize,
    pub unicast: usize,
    pub streams: usize,
    pub unicast_streams: usize,
    pub expected_subpackets: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub counts: ScheduleCounts,
    pub max_repetition: usize,
    pub repetition_bound: usize,
    pub perfect_partition: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn small_binomial(n: usize, k: usize) -> Result<u64> {
    binomial_u64(n as u64, k as u64)
        .ok_or_else(|| Error::Internal(format!("C({n},{k}) overflows u64")))
}

/// Checks exact cover, per-transmission structure, the repetition bound and
/// the closed-form counts. `cfg` supplies each user's `G_k`.
pub fn validate_schedule(sch: &Schedule, cfg: &SystemConfig) -> Result<ValidationReport> {
    let plan = &sch.plan;
    let users = &plan.users;
    let k = users.len();
    let t = plan.cache_gain;
    let phi = plan.subpackets_per_subfile;
    let bound = plan.repetition_bound();
    let phantom = matches!(plan.scheme, SchemeTag::Phantom { .. });
    let rx = |u: usize| cfg.rx_antennas(u).unwrap_or(0);
    let multicast_streams = |u: usize| {
        if phantom {
            rx(u).min(plan.beta)
        } else {
            plan.beta
        }
    };
    let mut violations = Vec::new();

    let mut delivered: HashMap<&SubpacketId, usize> = HashMap::new();
    let mut max_repetition = 0;
    let mut unicast_streams = 0;
    let mut actual_perfect = true;

    for (pos, tx) in sch.transmissions.iter().enumerate() {
        if tx.index != pos + 1 {
            violations.push(Violation::BadIndex {
                position: pos + 1,
                index: tx.index,
            });
        }
        let payload_users: Vec<usize> = tx.payload.iter().map(|p| p.user).collect();
        if payload_users != tx.targets
            || tx
                .payload
                .iter()
                .any(|p| p.subpackets.iter().any(|s| s.user != p.user))
            || tx.targets.windows(2).any(|w| w[0] >= w[1])
        {
            violations.push(Violation::PayloadMismatch { tx: tx.index });
        }
        let streams = tx.total_streams();
        if tx.kind == TxKind::Unicast && streams > plan.tx_antennas {
            violations.push(Violation::TxOverload {
                tx: tx.index,
                streams,
                cap: plan.tx_antennas,
            });
        }
        if tx.kind == TxKind::Unicast {
            unicast_streams += streams;
            actual_perfect &= streams == plan.tx_antennas;
        }

        for p in &tx.payload {
            let found = p.subpackets.len();
            let expected = match tx.kind {
                TxKind::Multicast => multicast_streams(p.user),
                TxKind::Unicast => rx(p.user),
            };
            let mismatch = match tx.kind {
                TxKind::Multicast => found != expected,
                TxKind::Unicast => found == 0 || found > expected,
            };
            if mismatch {
                violations.push(Violation::StreamCount {
                    tx: tx.index,
                    user: p.user,
                    expected,
                    found,
                });
            }

            let mut per_subfile: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
            for id in &p.subpackets {
                *delivered.entry(id).or_insert(0) += 1;
                let well_formed = users.binary_search(&id.user).is_ok()
                    && id.subfile.len() == t
                    && id.subfile.windows(2).all(|w| w[0] < w[1])
                    && id.subfile.iter().all(|u| users.binary_search(u).is_ok())
                    && !id.subfile.contains(&id.user)
                    && id.q >= 1
                    && id.q <= phi;
                if !well_formed {
                    violations.push(Violation::Unexpected {
                        tx: tx.index,
                        id: id.clone(),
                    });
                }
                if tx.kind == TxKind::Multicast {
                    if !id
                        .subfile
                        .iter()
                        .all(|u| *u != id.user && tx.targets.contains(u))
                    {
                        violations.push(Violation::SubfileOutsideTargets {
                            tx: tx.index,
                            id: id.clone(),
                        });
                    }
                    *per_subfile.entry(&id.subfile).or_insert(0) += 1;
                }
            }
            for (subfile, count) in per_subfile {
                max_repetition = max_repetition.max(count);
                if count > bound {
                    violations.push(Violation::Repetition {
                        tx: tx.index,
                        user: p.user,
                        subfile: subfile.clone(),
                        count,
                        bound,
                    });
                }
            }
        }
    }

    let mut expected_subpackets = 0u64;
    for &u in users {
        let others: Vec<usize> = users.iter().copied().filter(|&x| x != u).collect();
        for subfile in enumerate_subsets(&others, t)? {
            for q in 1..=phi {
                expected_subpackets += 1;
                let id = SubpacketId::new(u, subfile.clone(), q);
                match delivered.get(&id) {
                    None => violations.push(Violation::Missing { id }),
                    Some(&c) if c > 1 => violations.push(Violation::Duplicate { id, count: c }),
                    Some(_) => {}
                }
            }
        }
    }

    let counts = ScheduleCounts {
        multicast: sch.multicast_count(),
        unicast: sch.unicast_count(),
        streams: sch.total_streams(),
        unicast_streams,
        expected_subpackets,
    };

    let expected_multicast = small_binomial(k, plan.omega)? * small_binomial(plan.omega - 1, t)?;
    let mut check = |what: &'static str, expected: u64, found: u64| {
        if expected != found {
            violations.push(Violation::Count {
                what,
                expected,
                found,
            });
        }
    };
    check(
        "multicast transmissions",
        expected_multicast,
        counts.multicast as u64,
    );
    check(
        "delivered streams",
        expected_subpackets,
        counts.streams as u64,
    );
    if phantom {
        let removed: u64 = users
            .iter()
            .map(|&u| (plan.beta - multicast_streams(u)) as u64)
            .sum::<u64>()
            * small_binomial(k - 1, plan.omega - 1)?
            * small_binomial(plan.omega - 1, t)?;
        check("unicast streams", removed, unicast_streams as u64);
        check("removal log", removed, sch.removal_log.len() as u64);
        let mut logged: Vec<&SubpacketId> = sch.removal_log.iter().collect();
        let mut sent: Vec<&SubpacketId> = sch
            .transmissions
            .iter()
            .filter(|t| t.kind == TxKind::Unicast)
            .flat_map(|t| t.entries())
            .collect();
        logged.sort();
        sent.sort();
        if logged != sent {
            violations.push(Violation::RemovalLog);
        }
    } else {
        check("unicast transmissions", 0, counts.unicast as u64);
        if !sch.removal_log.is_empty() {
            violations.push(Violation::RemovalLog);
        }
    }
    if sch.perfect_partition != actual_perfect {
        violations.push(Violation::PerfectPartitionFlag {
            flagged: sch.perfect_partition,
            actual: actual_perfect,
        });
    }

    Ok(ValidationReport {
        violations,
        counts,
        max_repetition,
        repetition_bound: bound,
        perfect_partition: actual_perfect,
    })
}
