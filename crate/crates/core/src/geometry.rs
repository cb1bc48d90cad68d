//! The planar experiment domains and the point sets used for the
//! translate-basis comparisons (uniform grids and Halton points).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, WsvdError};
use crate::kernels::distance;

pub type Point = [f64; 2];

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn contains(&self, p: &Point) -> bool {
        p[0] >= self.min[0] && p[0] <= self.max[0] && p[1] >= self.min[1] && p[1] <= self.max[1]
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// The four approximation domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0, 1]²`.
    UnitSquare,
    Disk {
        center: Point,
        radius: f64,
    },
    /// Unit disk centered at the origin with the open third quadrant removed.
    CutDisk,
    /// Intersection of the unit disks centered at `(±√2/2, 0)`.
    Lens,
}

/// Distance of each lens center from the origin.
pub const LENS_OFFSET: f64 = FRAC_1_SQRT_2;

impl Domain {
    /// The disk of radius 1/2 centered at (1/2, 1/2).
    pub fn disk() -> Domain {
        Domain::Disk {
            center: [0.5, 0.5],
            radius: 0.5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::UnitSquare => "square",
            Domain::Disk { .. } => "disk",
            Domain::CutDisk => "cutdisk",
            Domain::Lens => "lens",
        }
    }

    /// Closed-region membership.
    pub fn contains(&self, p: &Point) -> bool {
        let [x, y] = *p;
        match *self {
            Domain::UnitSquare => (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y),
            Domain::Disk { center, radius } => distance(p, &center) <= radius,
            Domain::CutDisk => x * x + y * y <= 1.0 && !(x < 0.0 && y < 0.0),
            Domain::Lens => distance(p, &[-LENS_OFFSET, 0.0]) <= 1.0 && distance(p, &[LENS_OFFSET, 0.0]) <= 1.0,
        }
    }

    /// Analytic area `|Ω|`.
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::UnitSquare => 1.0,
            Domain::Disk { radius, .. } => PI * radius * radius,
            Domain::CutDisk => 0.75 * PI,
            Domain::Lens => 0.5 * PI - 1.0,
        }
    }

    pub fn bbox(&self) -> BBox {
        match *self {
            Domain::UnitSquare => BBox {
                min: [0.0, 0.0],
                max: [1.0, 1.0],
            },
            Domain::Disk { center, radius } => BBox {
                min: [center[0] - radius, center[1] - radius],
                max: [center[0] + radius, center[1] + radius],
            },
            Domain::CutDisk => BBox {
                min: [-1.0, -1.0],
                max: [1.0, 1.0],
            },
            Domain::Lens => {
                let half_width = 1.0 - LENS_OFFSET;
                let half_height = (1.0 - LENS_OFFSET * LENS_OFFSET).sqrt();
                BBox {
                    min: [-half_width, -half_height],
                    max: [half_width, half_height],
                }
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = WsvdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Domain::UnitSquare),
            "disk" => Ok(Domain::disk()),
            "cutdisk" => Ok(Domain::CutDisk),
            "lens" => Ok(Domain::Lens),
            other => Err(WsvdError::InvalidArgument(format!("unknown domain `{other}`"))),
        }
    }
}

/// Van der Corput radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * scale;
        index /= base;
        scale *= inv_base;
    }
    value
}

/// The first `n` points of the base-(2, 3) Halton sequence, starting at
/// index 1, that fall inside the domain once mapped onto its bounding box.
pub fn halton_points(n: usize, domain: &Domain) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(WsvdError::InvalidArgument("halton_points needs n >= 1".into()));
    }
    let bbox = domain.bbox();
    let mut points = Vec::with_capacity(n);
    let mut index = 1u64;
    while points.len() < n {
        let p = [
            bbox.min[0] + radical_inverse(index, 2) * bbox.width(),
            bbox.min[1] + radical_inverse(index, 3) * bbox.height(),
        ];
        if domain.contains(&p) {
            points.push(p);
        }
        index += 1;
    }
    Ok(points)
}

fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.5 * (a + b)];
    }
    let step = (b - a) / (m - 1) as f64;
    (0..m)
        .map(|i| if i == m - 1 { b } else { a + step * i as f64 })
        .collect()
}

/// An `m × m` grid over the bounding box, restricted to the domain. The
/// points are ordered row by row (`y` outer, `x` inner). A single point per
/// side sits at the center of the box.
pub fn uniform_grid(m: usize, domain: &Domain) -> Result<Vec<Point>> {
    if m == 0 {
        return Err(WsvdError::InvalidArgument("uniform_grid needs m >= 1".into()));
    }
    let bbox = domain.bbox();
    let xs = linspace(bbox.min[0], bbox.max[0], m);
    let ys = linspace(bbox.min[1], bbox.max[1], m);
    Ok(ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| [x, y]))
        .filter(|p| domain.contains(p))
        .collect())
}

/// Fill distance estimate `h` (over the probe set) and separation distance
/// `q` (exact) of a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FillSeparation {
    pub fill: f64,
    pub separation: f64,
}

impl FillSeparation {
    /// Uniformity ratio `q / h`.
    pub fn uniformity(&self) -> f64 {
        self.separation / self.fill
    }
}

pub fn fill_and_separation(points: &[Point], probe: &[Point]) -> Result<FillSeparation> {
    if points.len() < 2 {
        return Err(WsvdError::TooFewPoints {
            required: 2,
            got: points.len(),
        });
    }
    let mut min_pair = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            min_pair = min_pair.min(distance(p, q));
        }
    }
    let fill = probe
        .iter()
        .map(|y| points.iter().map(|x| distance(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(FillSeparation {
        fill,
        separation: 0.5 * min_pair,
    })
}
