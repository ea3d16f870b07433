use crate::{FieldError, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartKind {
    FlatBox,
    /// Stereographic chart of the round sphere of the given radius.
    StereoChart { radius: f64 },
}

/// Axis-aligned box in chart coordinates with N grid points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartDomain {
    kind: ChartKind,
    lo: Point,
    hi: Point,
    n: usize,
}

impl ChartDomain {
    pub const MIN_RESOLUTION: usize = 5;

    pub fn new(kind: ChartKind, lo: Point, hi: Point, n: usize) -> Result<Self> {
        if n < Self::MIN_RESOLUTION {
            return Err(FieldError::ResolutionTooLow { n, min: Self::MIN_RESOLUTION });
        }
        if (0..3).any(|a| !(lo[a] < hi[a]) || !lo[a].is_finite() || !hi[a].is_finite()) {
            return Err(FieldError::InvalidBounds(format!("{lo:?} .. {hi:?}")));
        }
        if let ChartKind::StereoChart { radius } = kind {
            if !(radius > 0.0) {
                return Err(FieldError::InvalidBounds(format!("sphere radius {radius}")));
            }
        }
        Ok(Self { kind, lo, hi, n })
    }

    pub fn cube(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(ChartKind::FlatBox, [a; 3], [b; 3], n)
    }

    pub fn stereo(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(ChartKind::StereoChart { radius: 1.0 }, [a; 3], [b; 3], n)
    }

    pub fn with_resolution(&self, n: usize) -> Result<Self> {
        Self::new(self.kind, self.lo, self.hi, n)
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> Point {
        let h = |a: usize| (self.hi[a] - self.lo[a]) / (self.n - 1) as f64;
        [h(0), h(1), h(2)]
    }

    /// Number of grid points, N³.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        [idx / (self.n * self.n), (idx / self.n) % self.n, idx % self.n]
    }

    pub fn point(&self, idx: usize) -> Point {
        let c = self.coords(idx);
        let h = self.spacing();
        [0, 1, 2].map(|a| self.lo[a] + c[a] as f64 * h[a])
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// True when the point is at least `layers` nodes away from every face.
    pub fn is_interior(&self, idx: usize, layers: usize) -> bool {
        self.coords(idx).iter().all(|&c| c >= layers && c + layers < self.n)
    }

    pub fn cell_count(&self) -> usize {
        (self.n - 1).pow(3)
    }

    /// Grid indices of the eight corners and the center of cell `c`.
    pub fn cell(&self, c: usize) -> ([usize; 8], Point) {
        let m = self.n - 1;
        let (i, j, k) = (c / (m * m), (c / m) % m, c % m);
        let mut corners = [0; 8];
        for (slot, corner) in corners.iter_mut().enumerate() {
            *corner = self.index(i + (slot >> 2), j + ((slot >> 1) & 1), k + (slot & 1));
        }
        let h = self.spacing();
        let center = [
            self.lo[0] + (i as f64 + 0.5) * h[0],
            self.lo[1] + (j as f64 + 0.5) * h[1],
            self.lo[2] + (k as f64 + 0.5) * h[2],
        ];
        (corners, center)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    /// Round-metric conformal factor 2/(1 + |x/R|²) on stereo charts, 1 on flat boxes.
    pub fn conformal_factor(&self, x: Point) -> f64 {
        match self.kind {
            ChartKind::FlatBox => 1.0,
            ChartKind::StereoChart { radius } => {
                let s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (radius * radius);
                2.0 / (1.0 + s)
            }
        }
    }
}
