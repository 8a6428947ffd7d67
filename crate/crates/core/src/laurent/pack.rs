//! Exponent vectors packed into a single `u128`.
//!
//! Field `j` stores `e_j - lo_j` in `width` bits, with variable 0 in the
//! most significant field. Integer order then agrees with the
//! lexicographic order of monomials, and adding two keys adds the exponent
//! vectors (with offsets added too) as long as no field overflows.

use super::Monomial;

#[derive(Clone, Debug)]
pub(super) struct Packing {
    lo: Vec<i32>,
    width: u32,
}

impl Packing {
    /// A packing for exponents `lo_j ..= lo_j + span_j`, if they fit.
    pub fn new(lo: Vec<i32>, span: &[i64]) -> Option<Packing> {
        let rank = lo.len() as u32;
        let width = if rank == 0 { 32 } else { (128 / rank).min(32) };
        if width < 8 {
            return None;
        }
        let limit = 1i64 << width;
        span.iter().all(|&s| (0..limit).contains(&s)).then_some(Packing { lo, width })
    }

    /// Same field width, different offsets.
    pub fn with_offsets(&self, lo: Vec<i32>) -> Packing {
        Packing { lo, width: self.width }
    }

    pub fn pack(&self, m: &Monomial) -> u128 {
        m.0.iter().zip(&self.lo).fold(0u128, |k, (&e, &lo)| (k << self.width) | (i64::from(e) - i64::from(lo)) as u128)
    }

    pub fn unpack(&self, mut k: u128) -> Monomial {
        let mask = (1u128 << self.width) - 1;
        let mut e = vec![0; self.lo.len()];
        for j in (0..e.len()).rev() {
            e[j] = ((k & mask) as i64 + i64::from(self.lo[j])) as i32;
            k >>= self.width;
        }
        Monomial(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_addition() {
        let p = Packing::new(vec![-2, -1, 0], &[5, 3, 2]).unwrap();
        let ms = [vec![-2, 2, 0], vec![-1, -1, 1], vec![3, 0, 2], vec![0, 0, 0]];
        for a in &ms {
            let ka = p.pack(&Monomial(a.clone()));
            assert_eq!(p.unpack(ka).0, *a);
            for b in &ms {
                let kb = p.pack(&Monomial(b.clone()));
                assert_eq!(ka.cmp(&kb), a.cmp(b));
            }
        }
        let q = p.with_offsets(vec![0, 0, 0]);
        let sum = p.with_offsets(vec![-2, -1, 0]);
        let (a, b) = (Monomial(vec![1, 2, 1]), Monomial(vec![3, 0, 1]));
        assert_eq!(sum.unpack(p.pack(&a) + q.pack(&b)).0, vec![4, 2, 2]);
        assert!(Packing::new(vec![0; 4], &[1 << 32]).is_none());
        assert!(Packing::new(vec![0; 20], &[1]).is_none());
    }
}
