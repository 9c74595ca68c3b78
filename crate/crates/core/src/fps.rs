//! Truncated power series with complex coefficients.
//!
//! Used both for local Taylor jets of the potential and for the formal
//! algebra of asymptotic series.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet(pub Vec<C>);

fn zero() -> C {
    C::new(0.0, 0.0)
}

impl Jet {
    pub fn zeros(len: usize) -> Self {
        Jet(vec![zero(); len])
    }

    pub fn constant(c: C, len: usize) -> Self {
        let mut j = Self::zeros(len);
        if len > 0 {
            j.0[0] = c;
        }
        j
    }

    /// The identity series `h` truncated to `len` terms.
    pub fn var(len: usize) -> Self {
        let mut j = Self::zeros(len);
        if len > 1 {
            j.0[1] = C::new(1.0, 0.0);
        }
        j
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.0.truncate(len);
        self
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        Jet((0..n).map(|i| self.0[i] + o.0[i]).collect())
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        Jet((0..n).map(|i| self.0[i] - o.0[i]).collect())
    }

    pub fn scale(&self, c: C) -> Jet {
        Jet(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        let mut out = vec![zero(); n];
        for i in 0..n {
            if self.0[i] == zero() {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(out)
    }

    pub fn recip(&self) -> Result<Jet> {
        let n = self.len();
        if n == 0 || self.0[0] == zero() {
            return Err(Error::ZeroLeading);
        }
        let inv0 = 1.0 / self.0[0];
        let mut r = vec![zero(); n];
        r[0] = inv0;
        for k in 1..n {
            let mut s = zero();
            for j in 1..=k {
                s += self.0[j] * r[k - j];
            }
            r[k] = -s * inv0;
        }
        Ok(Jet(r))
    }

    pub fn div(&self, o: &Jet) -> Result<Jet> {
        Ok(self.mul(&o.recip()?))
    }

    /// `self^p` with the leading value `lead` selecting the branch.
    pub fn pow_with(&self, p: f64, lead: C) -> Result<Jet> {
        let n = self.len();
        let f0 = *self.0.first().ok_or(Error::ZeroLeading)?;
        if f0 == zero() {
            return Err(Error::ZeroLeading);
        }
        let mut g = vec![zero(); n];
        g[0] = lead;
        for k in 1..n {
            let mut s = zero();
            for j in 1..=k {
                s += self.0[j] * g[k - j] * (p * j as f64 - (k - j) as f64);
            }
            g[k] = s / (f0 * k as f64);
        }
        Ok(Jet(g))
    }

    pub fn sqrt_with(&self, lead: C) -> Result<Jet> {
        self.pow_with(0.5, lead)
    }

    pub fn exp(&self) -> Jet {
        let n = self.len();
        if n == 0 {
            return Jet(vec![]);
        }
        let mut g = vec![zero(); n];
        g[0] = self.0[0].exp();
        for k in 1..n {
            let mut s = zero();
            for j in 1..=k {
                s += self.0[j] * g[k - j] * j as f64;
            }
            g[k] = s / k as f64;
        }
        Jet(g)
    }

    /// Logarithm with the constant term `log0` supplied by the caller.
    pub fn log_with(&self, log0: C) -> Result<Jet> {
        let n = self.len();
        let f0 = *self.0.first().ok_or(Error::ZeroLeading)?;
        if f0 == zero() {
            return Err(Error::ZeroLeading);
        }
        let mut l = vec![zero(); n];
        l[0] = log0;
        for k in 1..n {
            let mut s = zero();
            for j in 1..k {
                s += l[j] * self.0[k - j] * j as f64;
            }
            l[k] = (self.0[k] - s / k as f64) / f0;
        }
        Ok(Jet(l))
    }

    /// Derivative; the result is one term shorter.
    pub fn deriv(&self) -> Jet {
        Jet((1..self.len()).map(|k| self.0[k] * k as f64).collect())
    }

    /// Antiderivative with constant term `c0`; the result is one term longer.
    pub fn integ(&self, c0: C) -> Jet {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(c0);
        out.extend(self.0.iter().enumerate().map(|(k, a)| a / (k + 1) as f64));
        Jet(out)
    }

    pub fn eval(&self, h: C) -> C {
        self.0.iter().rev().fold(zero(), |acc, a| acc * h + a)
    }

    /// `self(g(h))` for `g` without constant term.
    pub fn compose(&self, g: &Jet) -> Jet {
        let n = self.len().min(g.len());
        let mut out = Jet::zeros(n);
        for a in self.0[..n].iter().rev() {
            out = out.mul(&g.clone().truncate(n));
            out.0[0] += a;
        }
        out
    }

    /// Series inverse `h` with `self(h(u)) = u`; requires zero constant and
    /// nonzero linear term.
    pub fn revert(&self) -> Result<Jet> {
        let n = self.len();
        if n < 2 || self.0[1] == zero() {
            return Err(Error::ZeroLeading);
        }
        let mut h = Jet::zeros(n);
        h.0[1] = 1.0 / self.0[1];
        for k in 2..n {
            let comp = self.compose(&h);
            h.0[k] = -comp.0[k] / self.0[1];
        }
        Ok(h)
    }
}
