//! Configuration and identity types shared by every other module.
//!
//! Users carry global 1-based indices. Group `j` owns a contiguous index range,
//! in declaration order, so for groups `[(5, 2), (5, 4)]` users `1..=5` have two
//! receive antennas and users `6..=10` have four.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cache ratio `γ = M / N`, held as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CacheRatio(Ratio<u64>);

impl CacheRatio {
    pub fn new(numer: u64, denom: u64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Self(Ratio::new(numer, denom)))
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }

    /// `count · γ` when it is a whole number.
    pub fn scaled_integer(&self, count: usize) -> Option<usize> {
        let scaled = self.0 * Ratio::from_integer(count as u64);
        scaled.is_integer().then(|| scaled.to_integer() as usize)
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid cache ratio {0:?}: expected a decimal like \"0.04\" or a fraction like \"1/25\"")]
pub struct ParseCacheRatioError(String);

impl FromStr for CacheRatio {
    type Err = ParseCacheRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCacheRatioError(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| err())?;
            let d: u64 = d.trim().parse().map_err(|_| err())?;
            return CacheRatio::new(n, d).ok_or_else(err);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
        {
            return Err(err());
        }
        let whole: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let scale = 10u64.pow(frac_part.len() as u32);
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(err)?;
        CacheRatio::new(numer, scale).ok_or_else(err)
    }
}

impl fmt::Display for CacheRatio {
    /// Terminating decimals print as decimals, everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        let mut rest = d;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return write!(f, "{n}/{d}");
        }
        let digits = twos.max(fives);
        let scale = 10u128.pow(digits);
        let scaled = n as u128 * (scale / d as u128);
        let whole = scaled / scale;
        if digits == 0 {
            return write!(f, "{whole}");
        }
        write!(
            f,
            "{whole}.{:0width$}",
            scaled % scale,
            width = digits as usize
        )
    }
}

impl Serialize for CacheRatio {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CacheRatio {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One class of users sharing the same receive-antenna count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupProfile {
    pub size: usize,
    pub rx_antennas: usize,
}

impl GroupProfile {
    pub fn new(size: usize, rx_antennas: usize) -> Self {
        Self { size, rx_antennas }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemConfig {
    pub tx_antennas: usize,
    pub cache_ratio: CacheRatio,
    pub groups: Vec<GroupProfile>,
    /// Library size `N`; 0 means unspecified. Labels reports only.
    pub library_size: u64,
    /// File size `F`; labels reports only.
    pub file_size: Option<u64>,
}

impl SystemConfig {
    pub fn new(tx_antennas: usize, cache_ratio: CacheRatio, groups: Vec<GroupProfile>) -> Self {
        Self {
            tx_antennas,
            cache_ratio,
            groups,
            library_size: 0,
            file_size: None,
        }
    }

    /// Convenience constructor taking `γ` as a decimal or fraction string and
    /// groups as `(size, rx_antennas)` pairs.
    pub fn from_parts(
        tx_antennas: usize,
        cache_ratio: &str,
        groups: &[(usize, usize)],
    ) -> Result<Self, ParseCacheRatioError> {
        Ok(Self::new(
            tx_antennas,
            cache_ratio.parse()?,
            groups
                .iter()
                .map(|&(k, g)| GroupProfile::new(k, g))
                .collect(),
        ))
    }

    pub fn num_users(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    /// Global coded-caching gain `t = Kγ`, if integral.
    pub fn cache_gain(&self) -> Option<usize> {
        self.cache_ratio.scaled_integer(self.num_users())
    }

    /// Per-group gain `t_(j) = K_(j)γ`, if integral.
    pub fn group_cache_gain(&self, group: usize) -> Option<usize> {
        self.cache_ratio.scaled_integer(self.groups[group].size)
    }

    /// Global 1-based user indices of group `group`.
    pub fn group_users(&self, group: usize) -> RangeInclusive<usize> {
        let start: usize = self.groups[..group].iter().map(|g| g.size).sum::<usize>() + 1;
        start..=start + self.groups[group].size - 1
    }

    /// Group index owning global user `user`.
    pub fn group_of(&self, user: usize) -> Option<usize> {
        let mut upper = 0;
        for (j, g) in self.groups.iter().enumerate() {
            upper += g.size;
            if user >= 1 && user <= upper {
                return Some(j);
            }
        }
        None
    }

    /// Receive antennas `G_k` of global user `user`.
    pub fn rx_antennas(&self, user: usize) -> Option<usize> {
        self.group_of(user).map(|j| self.groups[j].rx_antennas)
    }

    /// `G_k` for `k = 1..=K`, index 0 holding user 1.
    pub fn antenna_profile(&self) -> Vec<usize> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.rx_antennas, g.size))
            .collect()
    }

    pub fn min_rx_antennas(&self) -> Option<usize> {
        self.groups.iter().map(|g| g.rx_antennas).min()
    }

    /// Checks every configuration invariant and reports all violations at once.
    /// With `require_group_integrality`, every `K_(j)γ` must also be whole.
    pub fn validate(&self, require_group_integrality: bool) -> Result<(), ConfigError> {
        let mut violations = Vec::new();
        if self.tx_antennas == 0 {
            violations.push(ConfigViolation::NoTxAntennas);
        }
        let gamma = self.cache_ratio.as_ratio();
        if gamma.is_zero() || gamma >= Ratio::one() {
            violations.push(ConfigViolation::CacheRatioOutOfRange(self.cache_ratio));
        }
        if self.groups.is_empty() {
            violations.push(ConfigViolation::NoGroups);
        }
        for (j, g) in self.groups.iter().enumerate() {
            if g.size == 0 {
                violations.push(ConfigViolation::EmptyGroup { group: j + 1 });
            }
            if g.rx_antennas == 0 {
                violations.push(ConfigViolation::NoRxAntennas { group: j + 1 });
            }
        }
        for (j, pair) in self.groups.windows(2).enumerate() {
            if pair[0].rx_antennas >= pair[1].rx_antennas {
                violations.push(ConfigViolation::AntennasNotIncreasing {
                    group: j + 2,
                    previous: pair[0].rx_antennas,
                    current: pair[1].rx_antennas,
                });
            }
        }
        let k = self.num_users();
        if k > 0 && self.cache_gain().is_none() {
            violations.push(ConfigViolation::FractionalCacheGain {
                users: k,
                gamma: self.cache_ratio,
            });
        }
        if require_group_integrality {
            for (j, g) in self.groups.iter().enumerate() {
                if g.size > 0 && self.group_cache_gain(j).is_none() {
                    violations.push(ConfigViolation::FractionalGroupCacheGain {
                        group: j + 1,
                        size: g.size,
                        gamma: self.cache_ratio,
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { violations })
        }
    }
}

/// Free-function form of [`SystemConfig::validate`].
pub fn validate_config(
    cfg: &SystemConfig,
    require_group_integrality: bool,
) -> Result<(), ConfigError> {
    cfg.validate(require_group_integrality)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigViolation {
    #[error("tx_antennas: must be at least 1")]
    NoTxAntennas,
    #[error("cache_ratio: {0} is not strictly between 0 and 1")]
    CacheRatioOutOfRange(CacheRatio),
    #[error("groups: at least one group is required")]
    NoGroups,
    #[error("groups[{group}].size: must be at least 1")]
    EmptyGroup { group: usize },
    #[error("groups[{group}].rx_antennas: must be at least 1")]
    NoRxAntennas { group: usize },
    #[error(
        "groups[{group}].rx_antennas: {current} does not exceed the previous group's {previous}"
    )]
    AntennasNotIncreasing {
        group: usize,
        previous: usize,
        current: usize,
    },
    #[error("cache_ratio: K·γ = {users}·{gamma} is not an integer")]
    FractionalCacheGain { users: usize, gamma: CacheRatio },
    #[error("groups[{group}].size: K_({group})·γ = {size}·{gamma} is not an integer")]
    FractionalGroupCacheGain {
        group: usize,
        size: usize,
        gamma: CacheRatio,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ConfigError {
    pub violations: Vec<ConfigViolation>,
}

/// One delivered stream's payload: subpacket `q` of subfile `W_P` of the file
/// requested by `user`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubpacketId {
    pub user: usize,
    /// Sorted user indices caching this subfile.
    pub subfile: Vec<usize>,
    /// 1-based subpacket index.
    pub q: u64,
}

impl SubpacketId {
    pub fn new(user: usize, subfile: Vec<usize>, q: u64) -> Self {
        debug_assert!(subfile.windows(2).all(|w| w[0] < w[1]));
        Self { user, subfile, q }
    }
}

impl fmt::Display for SubpacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.subfile.iter().map(|u| u.to_string()).collect();
        write!(f, "W[{}]_{{{}}}^{}", self.user, p.join(","), self.q)
    }
}
