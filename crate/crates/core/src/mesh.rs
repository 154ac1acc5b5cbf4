//! Uniform cell-centered meshes and cell-averaged fields.
//!
//! Fields store values in row-major order (`j * nx + i`, with `j` the y
//! index) and interleave components per cell: a two-component field on a 1D
//! mesh is laid out as `[h_0, hv_0, h_1, hv_1, ...]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_cells: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidGrid("at least two cells are required"));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid("empty or non-finite interval"));
        }
        Ok(Self {
            n_cells,
            x_min,
            x_max,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    /// A single-cell axis, used to embed a 1D problem in a 2D grid.
    pub fn collapsed(x_min: f64, x_max: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid("empty or non-finite interval"));
        }
        Ok(Self {
            n_cells: 1,
            x_min,
            x_max,
            dx: x_max - x_min,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Right edge of cell `i`, i.e. `x_{i+1/2}`.
    #[inline]
    pub fn edge(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 1.0) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    pub fn shape(&self, components: usize) -> Shape {
        Shape::new_1d(self.n_cells, components)
    }

    /// Midpoint projection of `f` onto the cells.
    pub fn project(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        let data = (0..self.n_cells).map(|i| f(self.center(i))).collect();
        Field::from_vec(self.shape(1), data)
    }
}

/// Tensor product of two [`Grid1D`] axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Self { x, y }
    }

    /// Square `n x n` grid on `[lo, hi]^2`.
    pub fn square(n: usize, lo: f64, hi: f64) -> Result<Self> {
        let axis = Grid1D::new(n, lo, hi)?;
        Ok(Self { x: axis, y: axis })
    }

    pub fn nx(&self) -> usize {
        self.x.n_cells()
    }

    pub fn ny(&self) -> usize {
        self.y.n_cells()
    }

    pub fn n_cells(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn cell_area(&self) -> f64 {
        self.x.dx() * self.y.dx()
    }

    pub fn shape(&self) -> Shape {
        Shape::new_2d(self.nx(), self.ny(), 1)
    }

    pub fn project(&self, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        let mut data = Vec::with_capacity(self.n_cells());
        for j in 0..self.ny() {
            let y = self.y.center(j);
            for i in 0..self.nx() {
                data.push(f(self.x.center(i), y));
            }
        }
        Field::from_vec(self.shape(), data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub nx: usize,
    pub ny: usize,
    pub components: usize,
}

impl Shape {
    pub fn new_1d(n: usize, components: usize) -> Self {
        Self { nx: n, ny: 1, components }
    }

    pub fn new_2d(nx: usize, ny: usize, components: usize) -> Self {
        Self { nx, ny, components }
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn len(&self) -> usize {
        self.n_cells() * self.components
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Cell-averaged solution values.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    shape: Shape,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(shape: Shape) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    /// Wraps `data`, rejecting a length mismatch or any non-finite entry.
    pub fn from_vec(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::InvalidParameter {
                name: "data",
                reason: "length does not match the field shape",
            });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                cell: k / shape.components.max(1),
            });
        }
        Ok(Self { shape, data })
    }

    /// Wraps `data` without the finiteness scan. Length is still checked.
    pub(crate) fn from_vec_unchecked(shape: Shape, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), shape.len());
        Self { shape, data }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, cell: usize, component: usize) -> f64 {
        self.data[cell * self.shape.components + component]
    }

    #[inline]
    pub fn set(&mut self, cell: usize, component: usize, value: f64) {
        self.data[cell * self.shape.components + component] = value;
    }

    /// Copy of one component across all cells.
    pub fn component(&self, component: usize) -> Vec<f64> {
        self.data
            .iter()
            .skip(component)
            .step_by(self.shape.components)
            .copied()
            .collect()
    }

    pub fn check_shape(&self, expected: Shape) -> Result<()> {
        if self.shape != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: self.shape,
            });
        }
        Ok(())
    }

    /// Index of the first non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.data
            .iter()
            .position(|v| !v.is_finite())
            .map(|k| k / self.shape.components)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: f64) -> Field {
        Field::from_vec_unchecked(self.shape, self.data.iter().map(|a| alpha * a).collect())
    }

    /// `self += alpha * x`.
    pub fn axpy(&mut self, alpha: f64, x: &Field) -> Result<()> {
        x.check_shape(self.shape)?;
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        other.check_shape(self.shape)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Field::from_vec_unchecked(self.shape, data))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }
}
