use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::flow::{assign_by_flow, SlotShape, SubfileChoices};
use super::{
    Assignment, PlacementMap, RemovalPolicy, Schedule, ScheduleOptions, SchedulePlan, SchemeTag,
    Transmission, TxKind, UserPayload,
};
use crate::analytics::{dof_grouping, dof_min_g, phantom_design, symmetric_counts};
use crate::combinatorics::{binomial_u64, enumerate_subsets, BigCount};
use crate::error::{Error, Result};
use crate::model::{SubpacketId, SystemConfig};
use crate::optimizer::is_feasible;

fn to_u64(value: &BigCount, what: &'static str) -> Result<u64> {
    value.to_u64().ok_or(Error::Size {
        what,
        value: usize::MAX,
        cap: usize::MAX,
    })
}

/// Symmetric delivery for users `1..=k_eff` with default options.
pub fn build_symmetric_schedule(
    k_eff: usize,
    cache_gain: usize,
    tx_antennas: usize,
    rx_antennas: usize,
    omega: usize,
    beta: usize,
) -> Result<Schedule> {
    let users: Vec<usize> = (1..=k_eff).collect();
    build_symmetric_schedule_on(
        &users,
        cache_gain,
        tx_antennas,
        rx_antennas,
        omega,
        beta,
        &ScheduleOptions::default(),
    )
}

/// Symmetric delivery on an arbitrary user set; subfile indices are subsets of `users`.
pub fn build_symmetric_schedule_on(
    users: &[usize],
    cache_gain: usize,
    tx_antennas: usize,
    rx_antennas: usize,
    omega: usize,
    beta: usize,
    opts: &ScheduleOptions,
) -> Result<Schedule> {
    symmetric(
        users,
        cache_gain,
        tx_antennas,
        rx_antennas,
        omega,
        beta,
        opts,
        SchemeTag::Symmetric,
    )
}

#[allow(clippy::too_many_arguments)]
fn symmetric(
    users: &[usize],
    t: usize,
    tx_antennas: usize,
    rx_antennas: usize,
    omega: usize,
    beta: usize,
    opts: &ScheduleOptions,
    scheme: SchemeTag,
) -> Result<Schedule> {
    let mut users = users.to_vec();
    users.sort_unstable();
    users.dedup();
    let k = users.len();
    if k > opts.max_users {
        return Err(Error::Size {
            what: "users",
            value: k,
            cap: opts.max_users,
        });
    }
    if beta == 0 {
        return Err(Error::Domain("β must be at least 1".into()));
    }
    if omega > k {
        return Err(Error::Domain(format!(
            "Ω = {omega} exceeds the number of users {k}"
        )));
    }
    if !is_feasible(omega, beta, t, tx_antennas, rx_antennas)? {
        return Err(Error::Infeasible(format!(
            "(Ω={omega}, β={beta}) is infeasible for t={t}, L={tx_antennas}, G={rx_antennas}"
        )));
    }

    let (subfiles, phi_big, _) = symmetric_counts(k, t, omega, beta);
    let phi = to_u64(&phi_big, "subpackets per subfile")?;
    let reps = binomial_u64((omega - 1) as u64, t as u64).expect("desk-scale") as usize;
    let bound = beta.div_ceil(reps);
    let targets = enumerate_subsets(&users, omega)?;

    let choices = match opts.assignment {
        Assignment::Greedy => {
            let greedy = round_robin(&targets, t, beta, reps)?;
            if covers_exactly(&greedy, &targets, phi) {
                greedy
            } else {
                assign_by_flow(&flow_shape(&users, &targets, t, beta, reps, phi, bound))?
            }
        }
        Assignment::Flow => {
            assign_by_flow(&flow_shape(&users, &targets, t, beta, reps, phi, bound))?
        }
    };

    let stream_size = BigRational::new(BigInt::one(), BigInt::from(&subfiles * &phi_big));
    let mut next_q: HashMap<(usize, Vec<usize>), u64> = HashMap::new();
    let mut transmissions = Vec::with_capacity(targets.len() * reps);
    for (ti, tset) in targets.iter().enumerate() {
        for r in 0..reps {
            let payload = tset
                .iter()
                .enumerate()
                .map(|(pos, &user)| {
                    let subpackets = choices[ti][pos][r * beta..(r + 1) * beta]
                        .iter()
                        .map(|p| {
                            let q = next_q.entry((user, p.clone())).or_insert(0);
                            *q += 1;
                            SubpacketId::new(user, p.clone(), *q)
                        })
                        .collect();
                    UserPayload { user, subpackets }
                })
                .collect();
            transmissions.push(Transmission {
                kind: TxKind::Multicast,
                index: transmissions.len() + 1,
                targets: tset.clone(),
                payload,
                stream_size: stream_size.clone(),
            });
        }
    }

    Ok(Schedule {
        plan: SchedulePlan {
            scheme,
            users: users.clone(),
            tx_antennas,
            cache_gain: t,
            omega,
            beta,
            hat_g: None,
            subpackets_per_subfile: phi,
        },
        placement: PlacementMap {
            users,
            cache_gain: t,
            subfiles,
            subpackets_per_subfile: phi_big,
        },
        transmissions,
        removal_log: Vec::new(),
        perfect_partition: true,
    })
}

/// A cursor walks the subfile list of `T \ {k}` cyclically across all
/// repetitions of `T`, so each subfile gets exactly `β` entries per target set
/// and no repetition holds more than `⌈β/m⌉` of one subfile.
fn round_robin(
    targets: &[Vec<usize>],
    t: usize,
    beta: usize,
    reps: usize,
) -> Result<SubfileChoices> {
    targets
        .iter()
        .map(|tset| {
            tset.iter()
                .map(|&user| {
                    let others: Vec<usize> = tset.iter().copied().filter(|&u| u != user).collect();
                    let subfiles = enumerate_subsets(&others, t)?;
                    Ok((0..reps * beta)
                        .map(|c| subfiles[c % subfiles.len()].clone())
                        .collect())
                })
                .collect()
        })
        .collect()
}

fn covers_exactly(choices: &SubfileChoices, targets: &[Vec<usize>], phi: u64) -> bool {
    let mut counts: HashMap<(usize, &Vec<usize>), u64> = HashMap::new();
    for (ti, tset) in targets.iter().enumerate() {
        for (pos, &user) in tset.iter().enumerate() {
            for p in &choices[ti][pos] {
                *counts.entry((user, p)).or_insert(0) += 1;
            }
        }
    }
    counts.values().all(|&c| c == phi)
}

fn flow_shape<'a>(
    users: &'a [usize],
    targets: &'a [Vec<usize>],
    t: usize,
    beta: usize,
    reps: usize,
    phi: u64,
    bound: usize,
) -> SlotShape<'a> {
    SlotShape {
        users,
        targets,
        cache_gain: t,
        beta,
        repetitions: reps,
        subpackets_per_subfile: phi,
        repetition_bound: bound,
    }
}

/// Symmetric delivery over all users at `G = min_k G_k`.
pub fn build_min_g_schedule(cfg: &SystemConfig, opts: &ScheduleOptions) -> Result<Schedule> {
    let plan = dof_min_g(cfg)?;
    let users: Vec<usize> = (1..=cfg.num_users()).collect();
    symmetric(
        &users,
        plan.cache_gain,
        cfg.tx_antennas,
        plan.check_g,
        plan.omega,
        plan.beta,
        opts,
        SchemeTag::MinG,
    )
}

/// One symmetric schedule per group, each over that group's global user indices.
pub fn build_grouping_schedule(
    cfg: &SystemConfig,
    opts: &ScheduleOptions,
) -> Result<Vec<Schedule>> {
    let plan = dof_grouping(cfg)?;
    plan.groups
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let users: Vec<usize> = cfg.group_users(j).collect();
            symmetric(
                &users,
                g.cache_gain,
                cfg.tx_antennas,
                g.rx_antennas,
                g.omega,
                g.beta,
                opts,
                SchemeTag::Grouping { group: j + 1 },
            )
        })
        .collect()
}

/// Phantom delivery: the symmetric schedule for virtual antenna count `Ĝ`,
/// with each user's excess entries moved into unicast transmissions.
#[allow(clippy::too_many_arguments)]
pub fn build_phantom_schedule(
    cfg: &SystemConfig,
    hat_g: usize,
    omega: usize,
    beta: usize,
    policy: RemovalPolicy,
    seed: u64,
    opts: &ScheduleOptions,
) -> Result<Schedule> {
    let design = phantom_design(cfg, hat_g, omega, beta)?;
    let users: Vec<usize> = (1..=cfg.num_users()).collect();
    let t = cfg.cache_gain().expect("validated");
    let mut sch = symmetric(
        &users,
        t,
        cfg.tx_antennas,
        hat_g,
        omega,
        beta,
        opts,
        SchemeTag::Phantom { policy, seed },
    )?;
    sch.plan.hat_g = Some(hat_g);

    let profile = cfg.antenna_profile();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut backlog: Vec<VecDeque<SubpacketId>> = vec![VecDeque::new(); users.len() + 1];
    for tx in &mut sch.transmissions {
        for p in &mut tx.payload {
            let excess = beta - design.streams_for(profile[p.user - 1]);
            if excess == 0 {
                continue;
            }
            let mut drop: Vec<usize> = match policy {
                RemovalPolicy::DropLast => (beta - excess..beta).collect(),
                RemovalPolicy::Random => {
                    rand::seq::index::sample(&mut rng, beta, excess).into_vec()
                }
            };
            drop.sort_unstable();
            let mut moved: Vec<SubpacketId> =
                drop.iter().rev().map(|&i| p.subpackets.remove(i)).collect();
            moved.reverse();
            backlog[p.user].extend(moved.iter().cloned());
            sch.removal_log.extend(moved);
        }
    }

    let stream_size = sch
        .transmissions
        .first()
        .map(|t| t.stream_size.clone())
        .unwrap_or_default();
    let mut perfect = true;
    loop {
        let mut order: Vec<usize> = users
            .iter()
            .copied()
            .filter(|&u| !backlog[u].is_empty())
            .collect();
        if order.is_empty() {
            break;
        }
        order.sort_by(|&a, &b| backlog[b].len().cmp(&backlog[a].len()).then(a.cmp(&b)));
        let mut filled = 0;
        let mut payload = Vec::new();
        for u in order {
            if filled == cfg.tx_antennas {
                break;
            }
            let take = profile[u - 1]
                .min(backlog[u].len())
                .min(cfg.tx_antennas - filled);
            filled += take;
            payload.push(UserPayload {
                user: u,
                subpackets: backlog[u].drain(..take).collect(),
            });
        }
        perfect &= filled == cfg.tx_antennas;
        payload.sort_by_key(|p| p.user);
        sch.transmissions.push(Transmission {
            kind: TxKind::Unicast,
            index: sch.transmissions.len() + 1,
            targets: payload.iter().map(|p| p.user).collect(),
            payload,
            stream_size: stream_size.clone(),
        });
    }
    sch.perfect_partition = perfect;
    Ok(sch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::validate_schedule;

    fn example() -> SystemConfig {
        SystemConfig::from_parts(4, "0.2", &[(5, 2), (5, 4)]).unwrap()
    }

    fn ids(p: &UserPayload) -> Vec<String> {
        p.subpackets.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn min_g_example_counts() {
        let cfg = example();
        let sch = build_min_g_schedule(&cfg, &ScheduleOptions::default()).unwrap();
        assert_eq!(sch.transmissions.len(), 630);
        assert_eq!(sch.plan.subpackets_per_subfile, 14);
        assert_eq!(sch.total_streams(), 630 * 8);
        assert_eq!(
            sch.realized_dof().unwrap(),
            BigRational::from_integer(8.into())
        );
        assert!(sch.max_repetition() <= sch.plan.repetition_bound());
        let report = validate_schedule(&sch, &cfg).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn grouping_example_first_transmission() {
        let cfg = example();
        let schedules = build_grouping_schedule(&cfg, &ScheduleOptions::default()).unwrap();
        assert_eq!(schedules.len(), 2);
        assert_eq!(schedules[0].transmissions.len(), 20);
        assert_eq!(schedules[1].transmissions.len(), 10);
        let first = &schedules[0].transmissions[0];
        assert_eq!(first.targets, vec![1, 2, 3]);
        assert_eq!(ids(&first.payload[0]), ["W[1]_{2}^1", "W[1]_{3}^1"]);
        assert_eq!(ids(&first.payload[1]), ["W[2]_{1}^1", "W[2]_{3}^1"]);
        assert_eq!(ids(&first.payload[2]), ["W[3]_{1}^1", "W[3]_{2}^1"]);
        let pair = &schedules[1].transmissions[0];
        assert_eq!(pair.targets, vec![6, 7]);
        assert_eq!(
            ids(&pair.payload[0]),
            ["W[6]_{7}^1", "W[6]_{7}^2", "W[6]_{7}^3", "W[6]_{7}^4"]
        );
        assert_eq!(
            crate::schedule::combined_dof(&schedules).unwrap(),
            BigRational::new(48.into(), 7.into())
        );
        for s in &schedules {
            assert!(validate_schedule(s, &cfg).unwrap().violations.is_empty());
        }
    }

    #[test]
    fn phantom_example_counts() {
        let cfg = example();
        for policy in [RemovalPolicy::DropLast, RemovalPolicy::Random] {
            let sch = build_phantom_schedule(&cfg, 4, 3, 4, policy, 7, &ScheduleOptions::default())
                .unwrap();
            assert_eq!(sch.multicast_count(), 120);
            assert_eq!(sch.unicast_count(), 90);
            assert_eq!(sch.removal_log.len(), 360);
            assert_eq!(sch.total_streams(), 1440);
            assert!(sch.perfect_partition);
            assert_eq!(
                sch.realized_dof().unwrap(),
                BigRational::new(48.into(), 7.into())
            );
            let report = validate_schedule(&sch, &cfg).unwrap();
            assert!(report.violations.is_empty(), "{:?}", report.violations);
        }
    }

    #[test]
    fn phantom_random_policy_is_seeded() {
        let cfg = example();
        let opts = ScheduleOptions::default();
        let a = build_phantom_schedule(&cfg, 4, 3, 4, RemovalPolicy::Random, 1, &opts).unwrap();
        let b = build_phantom_schedule(&cfg, 4, 3, 4, RemovalPolicy::Random, 1, &opts).unwrap();
        let c = build_phantom_schedule(&cfg, 4, 3, 4, RemovalPolicy::Random, 2, &opts).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.removal_log, c.removal_log);
    }

    #[test]
    fn zero_cache_gain() {
        let sch = build_symmetric_schedule(4, 0, 2, 1, 2, 1).unwrap();
        assert_eq!(sch.transmissions.len(), 6);
        assert!(sch
            .transmissions
            .iter()
            .flat_map(|t| t.entries())
            .all(|s| s.subfile.is_empty()));
    }

    #[test]
    fn flow_matches_greedy_counts() {
        let opts = ScheduleOptions {
            assignment: Assignment::Flow,
            ..Default::default()
        };
        let users: Vec<usize> = (1..=6).collect();
        let sch = build_symmetric_schedule_on(&users, 2, 4, 3, 4, 2, &opts).unwrap();
        let greedy = build_symmetric_schedule(6, 2, 4, 3, 4, 2).unwrap();
        assert_eq!(sch.transmissions.len(), greedy.transmissions.len());
        assert!(sch.max_repetition() <= sch.plan.repetition_bound());
        let cfg = SystemConfig::from_parts(4, "1/3", &[(6, 3)]).unwrap();
        assert!(validate_schedule(&sch, &cfg).unwrap().violations.is_empty());
    }

    #[test]
    fn size_cap() {
        let err = build_symmetric_schedule(20, 2, 4, 2, 4, 1).unwrap_err();
        assert!(matches!(err, Error::Size { value: 20, .. }));
    }

    #[test]
    fn infeasible_design_rejected() {
        assert!(matches!(
            build_symmetric_schedule(5, 1, 4, 2, 5, 2),
            Err(Error::Infeasible(_))
        ));
    }
}
