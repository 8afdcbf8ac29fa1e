//! Negacyclic NTT over Z_q[x]/(x^n + 1).

use super::AlgebraError;

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn bitrev(x: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Twiddle tables for one (n, q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NttTables {
    pub n: usize,
    pub q: u32,
    pub psi: u32,
    zetas: Vec<u32>,
    zetas_inv: Vec<u32>,
    n_inv: u32,
}

impl NttTables {
    pub fn new(n: usize, q: u32) -> Result<Self, AlgebraError> {
        let qq = q as u64;
        if !n.is_power_of_two() || n < 2 || !is_prime(qq) || (qq - 1) % (2 * n as u64) != 0 {
            return Err(AlgebraError::UnsupportedRing { n, q });
        }
        // ψ has order exactly 2n iff ψ^n = −1.
        let psi = (2..qq)
            .map(|g| pow_mod(g, (qq - 1) / (2 * n as u64), qq))
            .find(|&c| pow_mod(c, n as u64, qq) == qq - 1)
            .ok_or(AlgebraError::UnsupportedRing { n, q })?;
        let psi_inv = pow_mod(psi, qq - 2, qq);
        let bits = n.trailing_zeros();
        let zetas = (0..n).map(|k| pow_mod(psi, bitrev(k, bits) as u64, qq) as u32).collect();
        let zetas_inv = (0..n)
            .map(|k| pow_mod(psi_inv, bitrev(k, bits) as u64, qq) as u32)
            .collect();
        Ok(NttTables {
            n,
            q,
            psi: psi as u32,
            zetas,
            zetas_inv,
            n_inv: pow_mod(n as u64, qq - 2, qq) as u32,
        })
    }

    pub fn forward(&self, a: &mut [u32]) {
        assert_eq!(a.len(), self.n);
        let q = self.q as u64;
        let mut k = 0;
        let mut len = self.n / 2;
        while len >= 1 {
            for start in (0..self.n).step_by(2 * len) {
                k += 1;
                let z = self.zetas[k] as u64;
                for j in start..start + len {
                    let t = z * a[j + len] as u64 % q;
                    let u = a[j] as u64;
                    a[j + len] = ((u + q - t) % q) as u32;
                    a[j] = ((u + t) % q) as u32;
                }
            }
            len /= 2;
        }
    }

    pub fn inverse(&self, a: &mut [u32]) {
        assert_eq!(a.len(), self.n);
        let q = self.q as u64;
        let mut len = 1;
        while len < self.n {
            let groups = self.n / (2 * len);
            for (g, start) in (0..self.n).step_by(2 * len).enumerate() {
                let z = self.zetas_inv[groups + g] as u64;
                for j in start..start + len {
                    let u = a[j] as u64;
                    let v = a[j + len] as u64;
                    a[j] = ((u + v) % q) as u32;
                    a[j + len] = ((u + q - v) % q * z % q) as u32;
                }
            }
            len *= 2;
        }
        for x in a.iter_mut() {
            *x = (*x as u64 * self.n_inv as u64 % q) as u32;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Coeff,
    Ntt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPoly {
    pub coeffs: Vec<u32>,
    pub q: u32,
    pub domain: Domain,
}

impl RingPoly {
    pub fn from_coeffs(coeffs: Vec<i64>, q: u32) -> Self {
        RingPoly {
            coeffs: coeffs.into_iter().map(|c| c.rem_euclid(q as i64) as u32).collect(),
            q,
            domain: Domain::Coeff,
        }
    }

    pub fn zero(n: usize, q: u32) -> Self {
        RingPoly { coeffs: vec![0; n], q, domain: Domain::Coeff }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    fn compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.q != other.q || self.n() != other.n() {
            return Err(AlgebraError::Dim(format!(
                "ring (n={}, q={}) vs (n={}, q={})",
                self.n(),
                self.q,
                other.n(),
                other.q
            )));
        }
        if self.domain != other.domain {
            return Err(AlgebraError::Domain);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        let q = self.q;
        Ok(RingPoly {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % q).collect(),
            q,
            domain: self.domain,
        })
    }

    /// Coefficient-wise product; only meaningful in the NTT domain.
    pub fn pointwise(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        if self.domain != Domain::Ntt {
            return Err(AlgebraError::Domain);
        }
        let q = self.q as u64;
        Ok(RingPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| (a as u64 * b as u64 % q) as u32)
                .collect(),
            q: self.q,
            domain: Domain::Ntt,
        })
    }

    pub fn to_ntt(&self, t: &NttTables) -> Result<Self, AlgebraError> {
        if self.domain != Domain::Coeff {
            return Err(AlgebraError::Domain);
        }
        self.check_tables(t)?;
        let mut c = self.coeffs.clone();
        t.forward(&mut c);
        Ok(RingPoly { coeffs: c, q: self.q, domain: Domain::Ntt })
    }

    pub fn from_ntt(&self, t: &NttTables) -> Result<Self, AlgebraError> {
        if self.domain != Domain::Ntt {
            return Err(AlgebraError::Domain);
        }
        self.check_tables(t)?;
        let mut c = self.coeffs.clone();
        t.inverse(&mut c);
        Ok(RingPoly { coeffs: c, q: self.q, domain: Domain::Coeff })
    }

    fn check_tables(&self, t: &NttTables) -> Result<(), AlgebraError> {
        if t.n != self.n() || t.q != self.q {
            return Err(AlgebraError::UnsupportedRing { n: self.n(), q: self.q });
        }
        Ok(())
    }

    /// Negacyclic product of two coefficient-domain polynomials.
    pub fn mul(&self, other: &Self, t: &NttTables) -> Result<Self, AlgebraError> {
        self.compatible(other)?;
        self.to_ntt(t)?.pointwise(&other.to_ntt(t)?)?.from_ntt(t)
    }
}
