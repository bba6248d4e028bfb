//! Piecewise-constant potentials and integration regions.
//!
//! A profile is a sorted, gap-free run of segments. Outside the support the
//! potential is zero on both sides. Gaps in the input become explicit
//! `V = 0` segments so that every boundary of the support is a segment edge.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative tolerance used when matching positions against segment edges.
const EDGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x_left: f64,
    pub x_right: f64,
    #[serde(rename = "V")]
    pub potential: f64,
}

impl Segment {
    pub fn new(x_left: f64, x_right: f64, potential: f64) -> Self {
        Segment { x_left, x_right, potential }
    }

    pub fn width(&self) -> f64 {
        self.x_right - self.x_left
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PotentialProfile {
    segments: Vec<Segment>,
}

impl PotentialProfile {
    /// Normalizes the segments: sorts them, rejects zero-width or overlapping
    /// pieces and fills gaps with `V = 0`.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self> {
        for (index, s) in segments.iter().enumerate() {
            if !(s.x_left.is_finite() && s.x_right.is_finite() && s.potential.is_finite()) {
                return Err(Error::NonFinite("segment"));
            }
            if s.x_right <= s.x_left {
                return Err(Error::DegenerateSegment { index, x_left: s.x_left, x_right: s.x_right });
            }
        }
        segments.sort_by(|a, b| a.x_left.total_cmp(&b.x_left));
        let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
        for s in segments {
            if let Some(last) = out.last() {
                let scale = last.x_right.abs().max(s.x_left.abs()).max(1.0);
                let gap = s.x_left - last.x_right;
                if gap < -EDGE_TOL * scale {
                    return Err(Error::OverlappingSegments { at: s.x_left });
                }
                if gap > EDGE_TOL * scale {
                    out.push(Segment::new(last.x_right, s.x_left, 0.0));
                } else {
                    // snap: exactly contiguous
                    let x_left = out.last().unwrap().x_right;
                    out.push(Segment::new(x_left, s.x_right, s.potential));
                    continue;
                }
            }
            out.push(s);
        }
        Ok(PotentialProfile { segments: out })
    }

    /// No potential anywhere.
    pub fn free() -> Self {
        PotentialProfile { segments: Vec::new() }
    }

    /// Barrier of height `v0` on `[-d/2, d/2]`.
    pub fn rectangular(v0: f64, d: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::InvalidArgument(format!("barrier width must be positive, got {d}")));
        }
        PotentialProfile::new(vec![Segment::new(-0.5 * d, 0.5 * d, v0)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `(x_left, x_right)` of the whole support.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.segments.first()?.x_left, self.segments.last()?.x_right))
    }

    /// Total support width `D`.
    pub fn width(&self) -> f64 {
        self.support().map_or(0.0, |(a, b)| b - a)
    }

    pub fn support_region(&self) -> Option<Region> {
        self.support().map(|(a, b)| Region { x1: a, x2: b })
    }

    pub fn max_potential(&self) -> f64 {
        self.segments.iter().map(|s| s.potential).fold(0.0, f64::max)
    }

    /// Potential at `x`; at an edge the value of the segment to the right.
    pub fn potential_at(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .find(|s| x >= s.x_left && x < s.x_right)
            .map_or(0.0, |s| s.potential)
    }

    /// Mirror symmetry about the centre of the support.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let Some((a, b)) = self.support() else {
            return true;
        };
        let n = self.segments.len();
        (0..n).all(|i| {
            let s = self.segments[i];
            let m = self.segments[n - 1 - i];
            (s.x_left - a - (b - m.x_right)).abs() <= tol
                && (s.x_right - a - (b - m.x_left)).abs() <= tol
                && (s.potential - m.potential).abs() <= tol
        })
    }

    /// True when both ends of `region` fall on segment edges (or outside the
    /// support in a way that only touches `V = 0`).
    pub fn is_aligned(&self, region: &Region) -> bool {
        let edges: Vec<f64> = self.edges();
        let on_edge = |x: f64| {
            let Some((a, b)) = self.support() else {
                return true;
            };
            if x <= a || x >= b {
                return true;
            }
            edges.iter().any(|e| (e - x).abs() <= EDGE_TOL * e.abs().max(1.0))
        };
        on_edge(region.x1) && on_edge(region.x2)
    }

    fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.segments.iter().map(|s| s.x_left).collect();
        if let Some(last) = self.segments.last() {
            e.push(last.x_right);
        }
        e
    }

    /// Copy of the profile with segment edges inserted at the region ends,
    /// extending the support with `V = 0` pieces when the region lies beyond it.
    pub fn split_at_region(&self, region: &Region) -> PotentialProfile {
        let mut points = self.edges();
        points.push(region.x1);
        points.push(region.x2);
        points.sort_by(f64::total_cmp);
        points.dedup_by(|a, b| (*a - *b).abs() <= EDGE_TOL * a.abs().max(b.abs()).max(1.0));
        let segments = points
            .windows(2)
            .map(|w| Segment::new(w[0], w[1], self.potential_at(0.5 * (w[0] + w[1]))))
            .collect();
        PotentialProfile { segments }
    }

    /// Raises the potential by `dv` on `region`, splitting segments as needed.
    pub fn shifted_on(&self, region: &Region, dv: f64) -> PotentialProfile {
        if region.is_empty() {
            return self.clone();
        }
        let mut split = self.split_at_region(region);
        for s in &mut split.segments {
            let mid = 0.5 * (s.x_left + s.x_right);
            if mid > region.x1 && mid < region.x2 {
                s.potential += dv;
            }
        }
        split
    }

    /// Parses either a JSON array of `{"x_left", "x_right", "V"}` objects or
    /// the rectangular shorthand `{"V0", "d"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Segments(Vec<Segment>),
            Rectangular {
                #[serde(rename = "V0")]
                v0: f64,
                d: f64,
            },
        }
        match serde_json::from_str::<Input>(text)? {
            Input::Segments(s) => PotentialProfile::new(s),
            Input::Rectangular { v0, d } => PotentialProfile::rectangular(v0, d),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.segments).expect("segments serialize")
    }
}

/// Interval `[x1, x2]` over which a time is accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x1: f64,
    pub x2: f64,
}

impl Region {
    /// A zero-measure region (`x1 == x2`) is accepted and yields zero times.
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite()) || x2 < x1 {
            return Err(Error::InvalidRegion { x1, x2 });
        }
        Ok(Region { x1, x2 })
    }

    pub fn length(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn is_empty(&self) -> bool {
        self.x2 <= self.x1
    }

    /// Intersection with `[a, b]`, if it has positive length.
    pub fn clip(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let lo = self.x1.max(a);
        let hi = self.x2.min(b);
        (hi > lo).then_some((lo, hi))
    }
}
