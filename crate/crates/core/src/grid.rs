//! Cell-centered uniform grids in 2, 3 or 4 dimensions.
//!
//! Axis 0 is the fastest-varying index. In axisymmetric mode axis 0 is the
//! cylindrical radius rho and every cell volume carries the 2*pi*rho Jacobian;
//! a field sampled on such a grid represents a rotationally symmetric field in
//! one dimension higher. Dimension 4 exists only for the lifted translating
//! graph check, which adds one flat axis to a 3-d axisymmetric product.

use crate::error::{Error, Result};

/// Highest grid dimension the stencil code has to handle.
pub const MAX_DIM: usize = 4;

/// Minimum cells per axis for a user-facing grid.
pub const MIN_CELLS_PER_AXIS: usize = 16;

/// Required empty-cell margin between the domain and the bounding box.
pub const BOUNDARY_MARGIN_CELLS: usize = 3;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coords {
    Cartesian,
    /// (rho, z) half-plane; volumes and boundary weights carry 2*pi*rho.
    Axisym,
}

/// Validated construction request for a [`Grid`].
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub dims: Vec<usize>,
    /// Low corner of the bounding box; cell centers sit at lo + (i + 1/2) h.
    pub lo: Vec<f64>,
    pub h: f64,
    pub coords: Coords,
}

impl GridSpec {
    pub fn new(dims: Vec<usize>, lo: Vec<f64>, h: f64, coords: Coords) -> Result<Self> {
        let spec = GridSpec { dims, lo, h, coords };
        spec.validate()?;
        Ok(spec)
    }

    /// Box `[lo, hi]` resolved with n cells along its largest extent.
    ///
    /// The box is padded by `BOUNDARY_MARGIN_CELLS + 1` cells on every side so
    /// cut-cell stencils never leave the grid. In axisymmetric mode a low rho
    /// side at 0 is kept exactly at the axis and gets no pad.
    pub fn around(lo: &[f64], hi: &[f64], n: usize, coords: Coords) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.len() > 3 {
            return Err(Error::Config(format!(
                "bounding box must be 2-d or 3-d, got {} axes",
                lo.len()
            )));
        }
        if n < MIN_CELLS_PER_AXIS {
            return Err(Error::Config(format!(
                "resolution {n} below minimum {MIN_CELLS_PER_AXIS}"
            )));
        }
        let pad_cells = (BOUNDARY_MARGIN_CELLS + 1) as f64;
        let max_extent = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| b - a)
            .fold(0.0f64, f64::max);
        if !(max_extent > 0.0) {
            return Err(Error::Config("empty bounding box".into()));
        }
        let h = max_extent / (n as f64 - 2.0 * pad_cells);
        let mut dims = Vec::new();
        let mut glo = Vec::new();
        for a in 0..lo.len() {
            let on_axis = coords == Coords::Axisym && a == 0 && lo[a].abs() < 1e-12;
            let lo_pad = if on_axis { 0.0 } else { pad_cells };
            let cells = ((hi[a] - lo[a]) / h + lo_pad + pad_cells).ceil() as usize;
            glo.push(if on_axis { 0.0 } else { lo[a] - lo_pad * h });
            dims.push(cells.max(MIN_CELLS_PER_AXIS));
        }
        GridSpec::new(dims, glo, h, coords)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dims.len();
        if d < 2 || d > 3 {
            return Err(Error::Config(format!("grids must be 2-d or 3-d, got {d}")));
        }
        if self.lo.len() != d {
            return Err(Error::Config("origin/dims length mismatch".into()));
        }
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::Config(format!("cell size h = {} invalid", self.h)));
        }
        for (a, &n) in self.dims.iter().enumerate() {
            if n < MIN_CELLS_PER_AXIS {
                return Err(Error::Config(format!(
                    "axis {a} has {n} cells, minimum is {MIN_CELLS_PER_AXIS}"
                )));
            }
        }
        if self.coords == Coords::Axisym {
            if d != 2 {
                return Err(Error::Config("axisymmetric grids are (rho, z)".into()));
            }
            if self.lo[0] < -1e-12 {
                return Err(Error::Config(format!(
                    "axisymmetric rho origin {} below 0",
                    self.lo[0]
                )));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Grid {
        Grid::from_parts(self.dims.clone(), self.lo.clone(), self.h, self.coords)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub dims: Vec<usize>,
    pub origin: Vec<f64>,
    pub h: f64,
    pub coords: Coords,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub(crate) fn from_parts(dims: Vec<usize>, origin: Vec<f64>, h: f64, coords: Coords) -> Self {
        let mut strides = Vec::with_capacity(dims.len());
        let mut s = 1usize;
        for &n in &dims {
            strides.push(s);
            s *= n;
        }
        Grid { dims, origin, h, coords, strides, len: s }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// Ambient dimension of the represented geometry (axisym grids describe 3-d bodies).
    #[inline]
    pub fn ambient_dim(&self) -> usize {
        match self.coords {
            Coords::Cartesian => self.dim(),
            Coords::Axisym => self.dim() + 1,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    #[inline]
    pub fn index(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        for (a, &i) in multi.iter().enumerate() {
            idx += i * self.strides[a];
        }
        idx
    }

    #[inline]
    pub fn multi(&self, idx: usize) -> [usize; MAX_DIM] {
        let mut m = [0usize; MAX_DIM];
        let mut rest = idx;
        for a in 0..self.dim() {
            m[a] = rest % self.dims[a];
            rest /= self.dims[a];
        }
        m
    }

    #[inline]
    pub fn axis_index(&self, idx: usize, axis: usize) -> usize {
        (idx / self.strides[axis]) % self.dims[axis]
    }

    /// Coordinate of the cell center along one axis.
    #[inline]
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + (i as f64 + 0.5) * self.h
    }

    #[inline]
    pub fn cell_center(&self, idx: usize) -> [f64; MAX_DIM] {
        let m = self.multi(idx);
        let mut x = [0.0; MAX_DIM];
        for a in 0..self.dim() {
            x[a] = self.coord(a, m[a]);
        }
        x
    }

    /// Cell volume including the axisymmetric Jacobian.
    #[inline]
    pub fn cell_volume(&self, idx: usize) -> f64 {
        let v = self.h.powi(self.dim() as i32);
        match self.coords {
            Coords::Cartesian => v,
            Coords::Axisym => {
                let rho = self.coord(0, self.axis_index(idx, 0));
                TWO_PI * rho * v
            }
        }
    }

    /// Metric weight at an arbitrary point (rho in axisym mode, 1 otherwise).
    #[inline]
    pub fn metric_weight(&self, x: &[f64]) -> f64 {
        match self.coords {
            Coords::Cartesian => 1.0,
            Coords::Axisym => x[0],
        }
    }

    /// True when axis 0 starts exactly on the symmetry axis, so index -1
    /// mirrors to index 0.
    #[inline]
    pub fn mirrored_axis(&self) -> bool {
        self.coords == Coords::Axisym && self.origin[0].abs() < 1e-12
    }

    /// Grid with one extra flat axis of `layers` cells appended, centered on 0.
    /// The axisymmetric weight of axis 0, if any, is preserved.
    pub fn lifted(&self, layers: usize) -> Grid {
        let mut dims = self.dims.clone();
        let mut origin = self.origin.clone();
        dims.push(layers);
        origin.push(-0.5 * layers as f64 * self.h);
        Grid::from_parts(dims, origin, self.h, self.coords)
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self.dims == other.dims && self.h == other.h && self.coords == other.coords
    }
}

/// A scalar sampled at every cell center of a grid.
///
/// Values outside the active domain are whatever the producer put there
/// (ghost extrapolations near the cut, filler beyond); consumers that care
/// use the domain mask.
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        ScalarField { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = grid.dim();
        let values = (0..grid.len())
            .map(|idx| {
                let x = grid.cell_center(idx);
                f(&x[..d])
            })
            .collect();
        ScalarField { grid: grid.clone(), values }
    }

    #[inline]
    pub fn max_interior(&self, mask: &[bool]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (idx, (&v, &inside)) in self.values.iter().zip(mask).enumerate() {
            if inside && best.map_or(true, |(_, b)| v > b) {
                best = Some((idx, v));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_axis0_fastest() {
        let g = Grid::from_parts(vec![4, 5, 6], vec![0.0; 3], 0.5, Coords::Cartesian);
        assert_eq!(g.stride(0), 1);
        assert_eq!(g.stride(1), 4);
        assert_eq!(g.stride(2), 20);
        assert_eq!(g.len(), 120);
        let idx = g.index(&[1, 2, 3]);
        assert_eq!(idx, 1 + 2 * 4 + 3 * 20);
        assert_eq!(g.multi(idx)[..3], [1, 2, 3]);
    }

    #[test]
    fn axisym_volume_carries_rho() {
        let g = Grid::from_parts(vec![8, 8], vec![0.0, -2.0], 0.5, Coords::Axisym);
        // first rho column: rho = 0.25
        let v = g.cell_volume(g.index(&[0, 3]));
        assert!((v - TWO_PI * 0.25 * 0.25).abs() < 1e-14);
        assert!(g.mirrored_axis());
    }

    #[test]
    fn around_respects_margin() {
        let spec = GridSpec::around(&[-1.0, -1.0], &[1.0, 1.0], 65, Coords::Cartesian).unwrap();
        let g = spec.build();
        // domain endpoint -1.0 must be at least 3 cells inside the box
        assert!(g.origin[0] + 3.0 * g.h < -1.0);
        assert!(g.coord(0, g.dims[0] - 4) > 1.0);
    }

    #[test]
    fn around_rejects_small_resolution() {
        assert!(GridSpec::around(&[-1.0, -1.0], &[1.0, 1.0], 8, Coords::Cartesian).is_err());
    }

    #[test]
    fn lifted_appends_flat_axis() {
        let g = Grid::from_parts(vec![8, 8], vec![0.0, -2.0], 0.5, Coords::Axisym);
        let l = g.lifted(3);
        assert_eq!(l.dim(), 3);
        assert_eq!(l.dims[2], 3);
        // middle layer centered on zero
        assert!((l.coord(2, 1)).abs() < 1e-14);
    }
}
