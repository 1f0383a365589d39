//! Rectangular (x, t) grids and field evaluation over them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gdt::{self, GdtOptions};
use crate::model::SeedParams;
use crate::numerics::Complex;

/// Uniform grid; `nx` points over `[xmin, xmax]`, `nt` over `[tmin, tmax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub tmin: f64,
    pub tmax: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, nx: usize, tmin: f64, tmax: f64, nt: usize) -> Result<Self> {
        let gs = GridSpec { xmin, xmax, nx, tmin, tmax, nt };
        gs.validate()?;
        Ok(gs)
    }

    /// `2 half + 1` points per axis centred on `(x0, t0)`.
    pub fn centered(x0: f64, t0: f64, hx: f64, ht: f64, half: usize) -> Self {
        let w = half as f64;
        GridSpec {
            xmin: x0 - w * hx,
            xmax: x0 + w * hx,
            nx: 2 * half + 1,
            tmin: t0 - w * ht,
            tmax: t0 + w * ht,
            nt: 2 * half + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.tmin, self.tmax].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("non-finite bounds".into()));
        }
        if self.nx < 2 || self.nt < 2 {
            return Err(Error::InvalidGrid(format!("need nx, nt >= 2, got {}x{}", self.nx, self.nt)));
        }
        if !(self.xmin < self.xmax) || !(self.tmin < self.tmax) {
            return Err(Error::InvalidGrid("bounds must be increasing".into()));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        (self.xmax - self.xmin) / (self.nx - 1) as f64
    }

    pub fn ht(&self) -> f64 {
        (self.tmax - self.tmin) / (self.nt - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx { self.xmax } else { self.xmin + i as f64 * self.hx() }
    }

    pub fn t(&self, j: usize) -> f64 {
        if j + 1 == self.nt { self.tmax } else { self.tmin + j as f64 * self.ht() }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index, x outer and t inner.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.nt + j
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.nx).flat_map(move |i| (0..self.nt).map(move |j| (i, j)))
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `xmin,xmax,nx,tmin,tmax,nt`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidGrid(format!("expected xmin,xmax,nx,tmin,tmax,nt, got `{s}`")));
        }
        let f = |k: usize| {
            parts[k].parse::<f64>().map_err(|e| Error::InvalidGrid(format!("`{}`: {e}", parts[k])))
        };
        let n = |k: usize| {
            parts[k].parse::<usize>().map_err(|e| Error::InvalidGrid(format!("`{}`: {e}", parts[k])))
        };
        GridSpec::new(f(0)?, f(1)?, n(2)?, f(3)?, f(4)?, n(5)?)
    }
}

/// Evaluated `u[N]`, `v[N]` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub u: Vec<Complex>,
    pub v: Vec<Complex>,
    pub params: SeedParams,
    pub order: usize,
}

impl FieldGrid {
    pub fn u_at(&self, i: usize, j: usize) -> Complex {
        self.u[self.spec.idx(i, j)]
    }

    pub fn v_at(&self, i: usize, j: usize) -> Complex {
        self.v[self.spec.idx(i, j)]
    }

    pub fn abs_u(&self) -> Vec<f64> {
        self.u.iter().map(|z| z.norm()).collect()
    }

    pub fn abs_v(&self) -> Vec<f64> {
        self.v.iter().map(|z| z.norm()).collect()
    }
}

/// Evaluates the Darboux engine at every grid point, in parallel.
pub fn evaluate_grid(p: &SeedParams, order: usize, gs: &GridSpec) -> Result<FieldGrid> {
    evaluate_grid_with(p, order, gs, &GdtOptions::default())
}

pub fn evaluate_grid_with(p: &SeedParams, order: usize, gs: &GridSpec, opts: &GdtOptions) -> Result<FieldGrid> {
    gs.validate()?;
    p.validate()?;
    let values: Vec<(Complex, Complex)> = (0..gs.len())
        .into_par_iter()
        .map(|k| {
            let (x, t) = (gs.x(k / gs.nt), gs.t(k % gs.nt));
            gdt::gdt_point_with(p, order, x, t, opts).map(|(u, v, _)| (u, v))
        })
        .collect::<Result<_>>()?;
    Ok(assemble(p, order, gs, values))
}

/// Single-threaded [`evaluate_grid`].
pub fn evaluate_grid_serial(p: &SeedParams, order: usize, gs: &GridSpec) -> Result<FieldGrid> {
    gs.validate()?;
    p.validate()?;
    let values = gs
        .points()
        .map(|(i, j)| gdt::gdt_point(p, order, gs.x(i), gs.t(j)).map(|(u, v, _)| (u, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(p, order, gs, values))
}

fn assemble(p: &SeedParams, order: usize, gs: &GridSpec, values: Vec<(Complex, Complex)>) -> FieldGrid {
    let (u, v) = values.into_iter().unzip();
    FieldGrid { spec: *gs, u, v, params: p.clone(), order }
}

/// Tabulates any pointwise `(u, v)` function in parallel.
pub fn evaluate_fn<F>(gs: &GridSpec, f: F) -> (Vec<Complex>, Vec<Complex>)
where
    F: Fn(f64, f64) -> (Complex, Complex) + Sync,
{
    (0..gs.len())
        .into_par_iter()
        .map(|k| f(gs.x(k / gs.nt), gs.t(k % gs.nt)))
        .unzip()
}
