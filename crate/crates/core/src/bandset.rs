//! Truncated infinite band sets `I = [a_1, b_1] ∪ [a_2, b_2] ∪ …`.
//!
//! A [`BandSet`] stores the first `K` bands of a spectrum whose bands run off
//! to infinity, optionally closed by a terminal ray `[a_{K+1}, ∞)`. Without the
//! ray the set is only known up to `b_K`; distance queries to the right of that
//! point would silently ignore the missing bands, so they are rejected.
//! A set marked complete (the whole spectrum of a bounded model) has no cap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandSetError {
    #[error("empty band list")]
    Empty,
    #[error("non-finite band edge at k={0}")]
    NonFinite(usize),
    #[error("a_1 < 0 violates V_0 ≥ 0 spectrum (a_1 = {0})")]
    NegativeBottom(f64),
    /// One-based index of the first band whose edges break `a_k < b_k < a_{k+1}`.
    #[error("edges not strictly interlacing at k={0}")]
    NotInterlacing(usize),
    #[error("Re z = {re} lies beyond the validity cap {cap} of the truncated band set")]
    OutsideValidity { re: f64, cap: f64 },
    #[error("no gaps")]
    NoGaps,
}

/// Where a real energy sits relative to a band set. Indices are zero-based:
/// `Band(k)` is `[a_{k+1}, b_{k+1}]` in one-based notation and `Gap(k)` is the
/// open interval between band `k` and band `k + 1`. The terminal ray, when
/// present, counts as band `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Below,
    Band(usize),
    Gap(usize),
    /// Beyond `b_K` with no terminal ray.
    Beyond,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandSetRepr", into = "BandSetRepr")]
pub struct BandSet {
    bands: Vec<(f64, f64)>,
    terminal_ray: Option<f64>,
    validity_cap: f64,
    complete: bool,
}

impl BandSet {
    /// Validates a list of `(a_k, b_k)` pairs. The validity cap is `b_K`.
    pub fn new(edges: &[(f64, f64)]) -> Result<Self, BandSetError> {
        Self::build(edges, None)
    }

    /// Like [`BandSet::new`], closing the set with the ray `[a_next, ∞)`.
    pub fn with_terminal_ray(edges: &[(f64, f64)], a_next: f64) -> Result<Self, BandSetError> {
        Self::build(edges, Some(a_next))
    }

    fn build(edges: &[(f64, f64)], ray: Option<f64>) -> Result<Self, BandSetError> {
        if edges.is_empty() {
            return Err(BandSetError::Empty);
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(BandSetError::NonFinite(k + 1));
            }
        }
        if edges[0].0 < 0.0 {
            return Err(BandSetError::NegativeBottom(edges[0].0));
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            let next = edges.get(k + 1).map(|e| e.0).or(ray);
            if a >= b || next.is_some_and(|n| b >= n) {
                return Err(BandSetError::NotInterlacing(k + 1));
            }
        }
        if let Some(r) = ray {
            if !r.is_finite() {
                return Err(BandSetError::NonFinite(edges.len() + 1));
            }
        }
        let validity_cap = if ray.is_some() {
            f64::INFINITY
        } else {
            edges[edges.len() - 1].1
        };
        Ok(Self {
            bands: edges.to_vec(),
            terminal_ray: ray,
            validity_cap,
            complete: false,
        })
    }

    pub fn bands(&self) -> &[(f64, f64)] {
        &self.bands
    }

    /// Number of finite bands `K`.
    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Marks the bands as the entire set rather than a truncation, lifting
    /// the validity cap.
    pub fn completed(mut self) -> Self {
        self.complete = true;
        self.validity_cap = f64::INFINITY;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn terminal_ray(&self) -> Option<f64> {
        self.terminal_ray
    }

    /// Largest `Re z` for which distance queries are exact.
    pub fn validity_cap(&self) -> f64 {
        self.validity_cap
    }

    pub fn bottom(&self) -> f64 {
        self.bands[0].0
    }

    /// `b_K`, the right edge of the last finite band.
    pub fn last_edge(&self) -> f64 {
        self.bands[self.bands.len() - 1].1
    }

    /// Represented gaps as `(b_k, a_{k+1})`, including the gap in front of
    /// the terminal ray.
    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let ray_gap = self.terminal_ray.map(|r| (self.last_edge(), r));
        self.bands
            .windows(2)
            .map(|w| (w[0].1, w[1].0))
            .chain(ray_gap)
    }

    pub fn locate(&self, x: f64) -> Location {
        if x < self.bottom() {
            return Location::Below;
        }
        // First band whose right edge is >= x.
        let k = self.bands.partition_point(|&(_, b)| b < x);
        if k == self.bands.len() {
            return match self.terminal_ray {
                Some(r) if x >= r => Location::Band(k),
                Some(_) => Location::Gap(k - 1),
                None => Location::Beyond,
            };
        }
        if x >= self.bands[k].0 {
            Location::Band(k)
        } else {
            Location::Gap(k - 1)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        matches!(self.locate(x), Location::Band(_))
    }

    /// Euclidean distance from `z` to the band set.
    pub fn dist(&self, z: Complex64) -> Result<f64, BandSetError> {
        if z.re > self.validity_cap {
            return Err(BandSetError::OutsideValidity {
                re: z.re,
                cap: self.validity_cap,
            });
        }
        let x = z.re;
        let dx = match self.locate(x) {
            Location::Band(_) => 0.0,
            Location::Below => self.bottom() - x,
            Location::Gap(k) => {
                let right = self.bands.get(k + 1).map_or_else(
                    || self.terminal_ray.expect("gap past b_K implies a ray"),
                    |b| b.0,
                );
                (x - self.bands[k].1).min(right - x)
            }
            Location::Beyond => x - self.last_edge(),
        };
        Ok(dx.hypot(z.im))
    }

    /// `r(I) = max_k r_k / b_k` over all represented gaps.
    pub fn gap_ratio(&self) -> Result<f64, BandSetError> {
        self.gaps()
            .map(|(b, a_next)| (a_next - b) / b)
            .reduce(f64::max)
            .ok_or(BandSetError::NoGaps)
    }

    /// The set `cI` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self, BandSetError> {
        let edges: Vec<_> = self.bands.iter().map(|&(a, b)| (c * a, c * b)).collect();
        let out = Self::build(&edges, self.terminal_ray.map(|r| c * r))?;
        Ok(if self.complete { out.completed() } else { out })
    }

    /// Short human-readable fingerprint used in report metadata.
    pub fn digest(&self) -> String {
        let mut s = format!(
            "K={};a1={:.6};bK={:.6}",
            self.len(),
            self.bottom(),
            self.last_edge()
        );
        if let Some(r) = self.terminal_ray {
            s.push_str(&format!(";ray={r:.6}"));
        }
        if self.complete {
            s.push_str(";complete");
        }
        if let Ok(r) = self.gap_ratio() {
            s.push_str(&format!(";r={r:.6}"));
        }
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BandSetRepr {
    Object {
        bands: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        terminal_ray: Option<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        complete: bool,
    },
    Bare(Vec<[f64; 2]>),
}

impl TryFrom<BandSetRepr> for BandSet {
    type Error = BandSetError;

    fn try_from(repr: BandSetRepr) -> Result<Self, Self::Error> {
        let (bands, ray, complete) = match repr {
            BandSetRepr::Object {
                bands,
                terminal_ray,
                complete,
            } => (bands, terminal_ray, complete),
            BandSetRepr::Bare(bands) => (bands, None, false),
        };
        let edges: Vec<_> = bands.into_iter().map(|[a, b]| (a, b)).collect();
        let set = BandSet::build(&edges, ray)?;
        Ok(if complete { set.completed() } else { set })
    }
}

impl From<BandSet> for BandSetRepr {
    fn from(set: BandSet) -> Self {
        BandSetRepr::Object {
            bands: set.bands.iter().map(|&(a, b)| [a, b]).collect(),
            terminal_ray: set.terminal_ray,
            complete: set.complete,
        }
    }
}
