use super::AlgebraError;

/// Row-major matrix over Z_q, q <= 2^16.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZqMatrix {
    rows: usize,
    cols: usize,
    q: u32,
    data: Vec<u16>,
}

fn check_q(q: u32) -> Result<(), AlgebraError> {
    if q < 2 || q > 1 << 16 {
        return Err(AlgebraError::Modulus(q));
    }
    Ok(())
}

impl ZqMatrix {
    pub fn zeros(rows: usize, cols: usize, q: u32) -> Result<Self, AlgebraError> {
        check_q(q)?;
        Ok(ZqMatrix { rows, cols, q, data: vec![0; rows * cols] })
    }

    /// Entries are reduced mod q.
    pub fn from_fn<F: FnMut(usize, usize) -> i64>(
        rows: usize,
        cols: usize,
        q: u32,
        mut f: F,
    ) -> Result<Self, AlgebraError> {
        check_q(q)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).rem_euclid(q as i64) as u16);
            }
        }
        Ok(ZqMatrix { rows, cols, q, data })
    }

    pub fn from_vec(rows: usize, cols: usize, q: u32, data: Vec<u16>) -> Result<Self, AlgebraError> {
        check_q(q)?;
        if data.len() != rows * cols {
            return Err(AlgebraError::Dim(format!("{} entries for {rows}x{cols}", data.len())));
        }
        if let Some(&x) = data.iter().find(|&&x| x as u32 >= q) {
            return Err(AlgebraError::Dim(format!("entry {x} >= q = {q}")));
        }
        Ok(ZqMatrix { rows, cols, q, data })
    }

    pub fn identity(n: usize, q: u32) -> Result<Self, AlgebraError> {
        Self::from_fn(n, n, q, |i, j| (i == j) as i64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j] as u32
    }

    /// Centered representative in [−⌊(q−1)/2⌋, ⌊q/2⌋].
    pub fn get_centered(&self, i: usize, j: usize) -> i64 {
        let x = self.get(i, j) as i64;
        if x > self.q as i64 / 2 {
            x - self.q as i64
        } else {
            x
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.q as i64) as u16;
    }

    pub fn transpose(&self) -> Self {
        let mut out = ZqMatrix { rows: self.cols, cols: self.rows, q: self.q, data: vec![0; self.data.len()] };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    fn same_q(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.q != other.q {
            return Err(AlgebraError::Dim(format!("moduli {} and {}", self.q, other.q)));
        }
        Ok(())
    }

    /// self · other mod q.
    pub fn matmul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_q(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::Dim(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let row = &mut acc[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (r, &b) in row.iter_mut().zip(orow) {
                    *r += a * b as u64;
                }
            }
            // Each term is below 2^32, so reducing once per row is safe for n < 2^31.
            for r in row.iter_mut() {
                *r %= q;
            }
        }
        Ok(ZqMatrix {
            rows: self.rows,
            cols: other.cols,
            q: self.q,
            data: acc.into_iter().map(|x| x as u16).collect(),
        })
    }

    /// selfᵀ · other mod q, without materializing the transpose.
    pub fn transpose_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_q(other)?;
        if self.rows != other.rows {
            return Err(AlgebraError::Dim(format!(
                "({}x{})^T times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.cols * other.cols];
        for k in 0..self.rows {
            let arow = &self.data[k * self.cols..(k + 1) * self.cols];
            let brow = &other.data[k * other.cols..(k + 1) * other.cols];
            for (i, &a) in arow.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let out = &mut acc[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out.iter_mut().zip(brow) {
                    *o += a as u64 * b as u64;
                }
            }
        }
        Ok(ZqMatrix {
            rows: self.cols,
            cols: other.cols,
            q: self.q,
            data: acc.into_iter().map(|x| (x % q) as u16).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip<F: Fn(i64, i64) -> i64>(&self, other: &Self, f: F) -> Result<Self, AlgebraError> {
        self.same_q(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::Dim(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q as i64;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a as i64, b as i64).rem_euclid(q) as u16)
            .collect();
        Ok(ZqMatrix { rows: self.rows, cols: self.cols, q: self.q, data })
    }

    /// Applies f to every entry and reduces into a new modulus.
    pub fn map_to<F: Fn(u32) -> i64>(&self, q: u32, f: F) -> Result<Self, AlgebraError> {
        check_q(q)?;
        let data = self
            .data
            .iter()
            .map(|&a| f(a as u32).rem_euclid(q as i64) as u16)
            .collect();
        Ok(ZqMatrix { rows: self.rows, cols: self.cols, q, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_product() {
        let x = ZqMatrix::from_fn(3, 2, 97, |i, j| (7 * i + j) as i64 - 5).unwrap();
        let i3 = ZqMatrix::identity(3, 97).unwrap();
        assert_eq!(i3.matmul(&x).unwrap(), x);
        assert_eq!(i3.transpose_mul(&x).unwrap(), x);
    }

    #[test]
    fn scalar_case() {
        let a = ZqMatrix::from_fn(1, 1, 1 << 15, |_, _| 30000).unwrap();
        let b = ZqMatrix::from_fn(1, 1, 1 << 15, |_, _| 12345).unwrap();
        assert_eq!(a.matmul(&b).unwrap().get(0, 0), (30000u64 * 12345 % 32768) as u32);
    }

    #[test]
    fn dimension_errors() {
        let a = ZqMatrix::zeros(2, 3, 16).unwrap();
        assert!(a.matmul(&a).is_err());
        assert!(a.transpose_mul(&ZqMatrix::zeros(3, 3, 16).unwrap()).is_err());
        assert!(a.add(&ZqMatrix::zeros(2, 3, 32).unwrap()).is_err());
        assert!(ZqMatrix::zeros(1, 1, 1 << 17).is_err());
        assert!(ZqMatrix::from_vec(1, 2, 16, vec![1]).is_err());
    }

    #[test]
    fn transpose_mul_matches_transpose_then_mul() {
        let a = ZqMatrix::from_fn(5, 3, 12289, |i, j| (i * 31 + j * 7) as i64 * 1000).unwrap();
        let b = ZqMatrix::from_fn(5, 4, 12289, |i, j| (i as i64 - j as i64) * 999).unwrap();
        assert_eq!(a.transpose_mul(&b).unwrap(), a.transpose().matmul(&b).unwrap());
    }
}
