use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::layout::QubitLayout;
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Scalar};

/// Largest target list accepted by [`LocalUnitary::new`].
pub const MAX_LOCAL_TARGETS: usize = 4;

/// Largest target list accepted by [`LocalUnitary::wide`].
pub const MAX_WIDE_TARGETS: usize = 12;

/// A unitary `U` on the qubits `G`, acting as `E ⊗ U'` on the whole register.
///
/// The matrix is row-major over the local basis, where target `G[0]` is the
/// most significant bit of the local index.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary<F: Scalar> {
    targets: Vec<usize>,
    matrix: Vec<Complex<F>>,
    /// For monomial matrices: `(row, entry)` of the single nonzero in each column.
    monomial: Option<Vec<(usize, Complex<F>)>>,
}

impl<F: Scalar> LocalUnitary<F> {
    pub fn new(targets: Vec<usize>, matrix: Vec<Complex<F>>) -> Result<Self> {
        Self::build(targets, matrix, MAX_LOCAL_TARGETS)
    }

    /// Like [`LocalUnitary::new`] but admits up to [`MAX_WIDE_TARGETS`] targets,
    /// for full-register matrices in validation code.
    pub fn wide(targets: Vec<usize>, matrix: Vec<Complex<F>>) -> Result<Self> {
        Self::build(targets, matrix, MAX_WIDE_TARGETS)
    }

    fn build(targets: Vec<usize>, matrix: Vec<Complex<F>>, max_targets: usize) -> Result<Self> {
        let k = targets.len();
        if k == 0 || k > max_targets {
            return Err(Error::InvalidParameters(format!("{k} targets; expected 1..={max_targets}")));
        }
        for (i, t) in targets.iter().enumerate() {
            if *t == 0 {
                return Err(Error::TargetOutOfRange { position: 0, total: 0 });
            }
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget(*t));
            }
        }
        let d = 1usize << k;
        if matrix.len() != d * d {
            return Err(Error::DimensionMismatch { targets: k, found: matrix.len() });
        }
        let deviation = unitarity_deviation(&matrix, d);
        if !(deviation <= F::UNITARY_TOL) {
            return Err(Error::NonUnitary { deviation });
        }
        let monomial = monomial_form(&matrix, d);
        Ok(LocalUnitary { targets, matrix, monomial })
    }

    fn real(targets: Vec<usize>, entries: &[f64]) -> Self {
        let matrix = entries.iter().map(|&x| Complex::new(F::of(x), F::zero())).collect();
        Self::new(targets, matrix).expect("builtin gate is unitary")
    }

    pub fn identity(target: usize) -> Self {
        Self::real(vec![target], &[1.0, 0.0, 0.0, 1.0])
    }

    pub fn x(target: usize) -> Self {
        Self::real(vec![target], &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn z(target: usize) -> Self {
        Self::real(vec![target], &[1.0, 0.0, 0.0, -1.0])
    }

    pub fn h(target: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(vec![target], &[s, s, s, -s])
    }

    pub fn phase(target: usize, theta: f64) -> Self {
        let matrix = vec![cone(), czero(), czero(), Complex::new(F::of(theta.cos()), F::of(theta.sin()))];
        Self::new(vec![target], matrix).expect("phase gate is unitary")
    }

    /// Controlled NOT with targets `(control, target)`.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(Error::DuplicateTarget(control));
        }
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        Ok(Self::real(vec![control, target], &m))
    }

    /// Haar-distributed unitary on `targets`, via QR of a complex Ginibre
    /// matrix with the phases of `R`'s diagonal absorbed into `Q`.
    pub fn haar<R: Rng + ?Sized>(targets: Vec<usize>, rng: &mut R) -> Result<Self> {
        let d = 1usize << targets.len();
        let mut cols: Vec<Vec<Complex<f64>>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
                    .collect()
            })
            .collect();
        // modified Gram-Schmidt, applied twice for orthogonality to full precision
        for _ in 0..2 {
            for j in 0..d {
                for i in 0..j {
                    let proj: Complex<f64> = (0..d).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                    for r in 0..d {
                        let v = cols[i][r] * proj;
                        cols[j][r] -= v;
                    }
                }
                let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in cols[j].iter_mut() {
                    *z /= norm;
                }
            }
        }
        // row-major assembly: entry (r, c) = cols[c][r]
        let matrix = (0..d * d)
            .map(|e| {
                let z = cols[e % d][e / d];
                Complex::new(F::of(z.re), F::of(z.im))
            })
            .collect();
        Self::new(targets, matrix)
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn matrix(&self) -> &[Complex<F>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        1 << self.targets.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    pub(crate) fn monomial(&self) -> Option<&[(usize, Complex<F>)]> {
        self.monomial.as_deref()
    }

    pub(crate) fn check_layout(&self, layout: &QubitLayout) -> Result<Vec<usize>> {
        self.targets.iter().map(|&p| layout.bit_of(p)).collect()
    }

    /// Offsets of every local basis state inside a global index, and the
    /// mask of all target bits.
    pub(crate) fn offsets(&self, layout: &QubitLayout) -> Result<(Vec<u64>, u64)> {
        let bits = self.check_layout(layout)?;
        let k = bits.len();
        let offsets = (0..1usize << k)
            .map(|l| (0..k).filter(|&j| (l >> (k - 1 - j)) & 1 == 1).map(|j| 1u64 << bits[j]).sum())
            .collect();
        let mask = bits.iter().map(|&b| 1u64 << b).sum();
        Ok((offsets, mask))
    }

    /// Apply to a dense amplitude buffer in place.
    pub(crate) fn apply_dense(&self, amps: &mut [Complex<F>], layout: &QubitLayout) -> Result<()> {
        let (offsets, mask) = self.offsets(layout)?;
        let d = offsets.len();
        let groups = amps.len() >> self.targets.len();
        let mut local = vec![czero::<F>(); d];
        let mut base = 0u64;
        if let Some(mono) = &self.monomial {
            // only entries that move or pick up a phase need touching
            let moves: Vec<(u64, u64, Complex<F>)> = mono
                .iter()
                .enumerate()
                .filter(|&(c, &(r, m))| r != c || m != cone::<F>())
                .map(|(c, &(r, m))| (offsets[c], offsets[r], m))
                .collect();
            let mut moved = vec![czero::<F>(); moves.len()];
            for _ in 0..groups {
                for (slot, &(src, _, _)) in moved.iter_mut().zip(&moves) {
                    *slot = amps[(base + src) as usize];
                }
                for (z, &(_, dst, m)) in moved.iter().zip(&moves) {
                    amps[(base + dst) as usize] = m * z;
                }
                base = ((base | mask).wrapping_add(1)) & !mask;
            }
            return Ok(());
        }
        for _ in 0..groups {
            let mut nonzero = false;
            for (l, &off) in offsets.iter().enumerate() {
                let z = amps[(base + off) as usize];
                nonzero |= z.re != F::zero() || z.im != F::zero();
                local[l] = z;
            }
            if nonzero {
                for (r, &off) in offsets.iter().enumerate() {
                    let row = &self.matrix[r * d..(r + 1) * d];
                    let mut acc = czero::<F>();
                    for (m, z) in row.iter().zip(local.iter()) {
                        acc += m * z;
                    }
                    amps[(base + off) as usize] = acc;
                }
            }
            // next index with every target bit clear
            base = ((base | mask).wrapping_add(1)) & !mask;
        }
        Ok(())
    }
}

fn unitarity_deviation<F: Scalar>(m: &[Complex<F>], d: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex::new(0.0f64, 0.0);
            for k in 0..d {
                let a = m[i * d + k];
                let b = m[j * d + k];
                acc += Complex::new(a.re.as_f64(), a.im.as_f64()) * Complex::new(b.re.as_f64(), -b.im.as_f64());
            }
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (acc - Complex::new(target, 0.0)).norm();
            if dev.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(dev);
        }
    }
    worst
}

fn monomial_form<F: Scalar>(m: &[Complex<F>], d: usize) -> Option<Vec<(usize, Complex<F>)>> {
    (0..d)
        .map(|c| {
            let mut rows = (0..d).filter(|&r| m[r * d + c] != czero());
            let r = rows.next()?;
            rows.next().is_none().then(|| (r, m[r * d + c]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedSpec;

    #[test]
    fn rejects_bad_gates() {
        let z = Complex::new(0.0f64, 0.0);
        let o = Complex::new(1.0f64, 0.0);
        assert!(matches!(LocalUnitary::new(vec![1], vec![o, o, z, o]), Err(Error::NonUnitary { .. })));
        assert_eq!(LocalUnitary::new(vec![1, 1], vec![o; 16]), Err(Error::DuplicateTarget(1)));
        assert!(matches!(LocalUnitary::new(vec![1], vec![o; 16]), Err(Error::DimensionMismatch { .. })));
        assert!(LocalUnitary::<f64>::cnot(2, 2).is_err());
        let nan = Complex::new(f64::NAN, 0.0);
        assert!(matches!(LocalUnitary::new(vec![1], vec![nan, z, z, o]), Err(Error::NonUnitary { .. })));
    }

    #[test]
    fn haar_gates_pass_admission() {
        let mut rng = SeedSpec::new(3).rng();
        for k in 1..=4 {
            let u = LocalUnitary::<f64>::haar((1..=k).collect(), &mut rng).unwrap();
            assert!(!u.is_monomial());
        }
    }

    #[test]
    fn monomial_detection() {
        assert!(LocalUnitary::<f64>::x(1).is_monomial());
        assert!(LocalUnitary::<f64>::cnot(1, 2).unwrap().is_monomial());
        assert!(LocalUnitary::<f64>::phase(1, 0.3).is_monomial());
        assert!(!LocalUnitary::<f64>::h(1).is_monomial());
    }
}
