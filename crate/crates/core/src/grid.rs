use serde::Serialize;

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[u_min, u_max] x [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        let r = Rect {
            u_min,
            u_max,
            v_min,
            v_max,
        };
        r.validate()?;
        Ok(r)
    }

    /// `[-a, a]^2`
    pub fn square(a: f64) -> Result<Self> {
        Rect::new(-a, a, -a, a)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.u_min, self.u_max, self.v_min, self.v_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("domain bounds must be finite".into()));
        }
        if !(self.u_min < self.u_max && self.v_min < self.v_max) {
            return Err(Error::InvalidParams(format!(
                "degenerate domain [{}, {}] x [{}, {}]",
                self.u_min, self.u_max, self.v_min, self.v_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        (self.u_min..=self.u_max).contains(&u) && (self.v_min..=self.v_max).contains(&v)
    }
}

/// Uniform node lattice over a rectangle. Nodes are stored row-major with `u`
/// varying fastest: index `j * nu + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub domain: Rect,
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(domain: Rect, nu: usize, nv: usize) -> Result<Self> {
        domain.validate()?;
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidParams(format!(
                "grid needs at least 2x2 nodes, got {nu}x{nv}"
            )));
        }
        Ok(Grid { domain, nu, nv })
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn spacing(&self) -> (f64, f64) {
        let d = &self.domain;
        (
            (d.u_max - d.u_min) / (self.nu - 1) as f64,
            (d.v_max - d.v_min) / (self.nv - 1) as f64,
        )
    }

    pub fn u(&self, i: usize) -> f64 {
        let d = &self.domain;
        if i == self.nu - 1 {
            d.u_max
        } else {
            d.u_min + (d.u_max - d.u_min) * i as f64 / (self.nu - 1) as f64
        }
    }

    pub fn v(&self, j: usize) -> f64 {
        let d = &self.domain;
        if j == self.nv - 1 {
            d.v_max
        } else {
            d.v_min + (d.v_max - d.v_min) * j as f64 / (self.nv - 1) as f64
        }
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.u(i), self.v(j))
    }

    /// Node coordinates in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.nv).flat_map(move |j| (0..self.nu).map(move |i| (i, j, self.u(i), self.v(j))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = Grid::new(Rect::new(-1.0, 1.0, 0.1, 0.7).unwrap(), 7, 13).unwrap();
        assert_eq!(g.u(0), -1.0);
        assert_eq!(g.u(6), 1.0);
        assert_eq!(g.v(0), 0.1);
        assert_eq!(g.v(12), 0.7);
        assert_eq!(g.u(3), 0.0);
        assert_eq!(g.nodes().count(), g.len());
        let (i, j, _, _) = g.nodes().nth(g.index(4, 2)).unwrap();
        assert_eq!((i, j), (4, 2));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Rect::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(Grid::new(Rect::square(1.0).unwrap(), 1, 5).is_err());
    }
}
