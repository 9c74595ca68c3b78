//! Quadrature rules: adaptive Gauss–Kronrod, Gauss–Legendre nodes and
//! Chebyshev panels with spectral antiderivatives.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 15-point panel: (kronrod value, error estimate).
pub fn gk15<F: Fn(f64) -> C>(f: &F, a: f64, b: f64) -> (C, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod integration of a complex integrand over `[a, b]`.
pub fn integrate<F: Fn(f64) -> C>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(C, f64)> {
    if a == b {
        return Ok((C::new(0.0, 0.0), 0.0));
    }
    let mut panels = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..2000 {
        let total: C = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.partial_cmp(&y.1 .2 .1).unwrap())
            .unwrap();
        let (pa, pb, _) = panels.swap_remove(idx);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            break;
        }
        panels.push((pa, m, gk15(&f, pa, m)));
        panels.push((m, pb, gk15(&f, m, pb)));
    }
    let total: C = panels.iter().map(|p| p.2 .0).sum();
    let err: f64 = panels.iter().map(|p| p.2 .1).sum();
    if err <= 100.0 * abs_tol.max(rel_tol * total.norm()) {
        Ok((total, err))
    } else {
        Err(Error::Tolerance { achieved: err })
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Chebyshev panel on [-1, 1] sampled at first-kind points.
#[derive(Clone, Debug)]
pub struct ChebPanel {
    pub n: usize,
    pub nodes: Vec<f64>,
    cos_table: Vec<Vec<f64>>,
}

impl ChebPanel {
    pub fn new(n: usize) -> Self {
        let nodes: Vec<f64> = (0..n)
            .map(|j| -(std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
            .collect();
        let cos_table = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .collect()
            })
            .collect();
        ChebPanel { n, nodes, cos_table }
    }

    /// Chebyshev coefficients of the interpolant (constant term not doubled).
    pub fn coeffs(&self, vals: &[C]) -> Vec<C> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut s = C::new(0.0, 0.0);
                for j in 0..n {
                    s += vals[j] * self.cos_table[k][j];
                }
                let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
                s * (sign * if k == 0 { 1.0 } else { 2.0 } / n as f64)
            })
            .collect()
    }

    /// Antiderivative coefficients vanishing at -1.
    pub fn antideriv(a: &[C]) -> Vec<C> {
        let n = a.len();
        let get = |k: usize| if k < n { a[k] } else { C::new(0.0, 0.0) };
        let mut b = vec![C::new(0.0, 0.0); n + 1];
        if n > 0 {
            b[1] = get(0) - get(2) * 0.5;
        }
        for k in 2..=n {
            b[k] = (get(k - 1) - get(k + 1)) / (2.0 * k as f64);
        }
        let mut s = C::new(0.0, 0.0);
        for (k, bk) in b.iter().enumerate().skip(1) {
            s += if k % 2 == 1 { -bk } else { *bk };
        }
        b[0] = -s;
        b
    }

    pub fn eval(a: &[C], x: f64) -> C {
        let mut b1 = C::new(0.0, 0.0);
        let mut b2 = C::new(0.0, 0.0);
        for ak in a.iter().skip(1).rev() {
            let b0 = ak + b1 * (2.0 * x) - b2;
            b2 = b1;
            b1 = b0;
        }
        a.first().copied().unwrap_or_default() + b1 * x - b2
    }

    /// Relative size of the trailing coefficients.
    pub fn tail(a: &[C]) -> f64 {
        let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let m = a.len();
        a[m.saturating_sub(3)..].iter().map(|c| c.norm()).fold(0.0, f64::max) / scale
    }
}
