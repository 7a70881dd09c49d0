//! The Galois ring GR(4, m) = Z4[Z] / h(Z).
//!
//! Elements are coordinate vectors over Z4 in the monomial basis
//! `{1, Z, ..., Z^{m-1}}`, LSB-first. The primitive element `ξ` is the
//! residue class of `Z`; its order is checked when the ring is built.

use crate::error::{Error, Result};

/// Defining polynomials for the four shipped code lengths, coefficients of
/// `Z^0, Z^1, ..., Z^m`.
pub const PRESET_POLYNOMIALS: [(usize, &[u8]); 4] = [
    // 3 + Z + 2Z^2 + Z^3
    (3, &[3, 1, 2, 1]),
    // 3 + 2Z + 3Z^2 + Z^5
    (5, &[3, 2, 3, 0, 0, 1]),
    // 3 + Z + 2Z^4 + Z^7
    (7, &[3, 1, 0, 0, 2, 0, 0, 1]),
    // 3 + 2Z^2 + 3Z^4 + Z^9
    (9, &[3, 0, 2, 0, 3, 0, 0, 0, 0, 1]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisRing {
    m: usize,
    h: Vec<u8>,
    xi_pow: Vec<Vec<u8>>,
    xi_bar_pow: Vec<Vec<u8>>,
}

impl GaloisRing {
    /// Build GR(4, m) from a monic degree-`m` polynomial over Z4.
    pub fn new(h: &[u8], m: usize) -> Result<Self> {
        if let Some(&c) = h.iter().find(|&&c| c > 3) {
            return Err(Error::InvalidSymbol(c as u32));
        }
        let degree = h.iter().rposition(|&c| c != 0).unwrap_or(0);
        if h.len() != m + 1 || degree != m {
            return Err(Error::WrongDegree { expected: m, got: degree });
        }
        if h[m] != 1 {
            return Err(Error::NonMonic);
        }
        if m == 0 || m > 16 {
            return Err(Error::WrongDegree { expected: m, got: degree });
        }

        let n = 1usize << m;
        let one = unit(m);
        let mut xi_pow = Vec::with_capacity(n - 1);
        let mut cur = one.clone();
        let mut order = 0;
        for j in 1..=n - 1 {
            xi_pow.push(cur.clone());
            cur = times_z(&cur, h);
            if cur == one {
                order = j;
                break;
            }
        }
        if order != n - 1 {
            return Err(Error::BadPrimitiveOrder {
                order: if order == 0 { n } else { order },
                expected: n - 1,
            });
        }
        let xi_bar_pow = xi_pow
            .iter()
            .map(|p| p.iter().map(|c| c & 1).collect())
            .collect();

        Ok(GaloisRing {
            m,
            h: h.to_vec(),
            xi_pow,
            xi_bar_pow,
        })
    }

    /// One of the shipped rings, selected by its degree.
    pub fn preset(m: usize) -> Result<Self> {
        let (_, h) = PRESET_POLYNOMIALS
            .iter()
            .find(|(pm, _)| *pm == m)
            .ok_or_else(|| Error::UnknownPreset(format!("m={m}")))?;
        Self::new(h, m)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `N = 2^m`.
    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn h(&self) -> &[u8] {
        &self.h
    }

    /// Coordinates of `ξ^j` for `j = 0..N-1`.
    pub fn xi_pow(&self) -> &[Vec<u8>] {
        &self.xi_pow
    }

    /// Coordinates of `ξ^j mod 2`, the powers of the binary primitive element.
    pub fn binary_counterpart(&self) -> &[Vec<u8>] {
        &self.xi_bar_pow
    }

    /// Product of two ring elements given by coordinates.
    pub fn mul(&self, p: &[u8], q: &[u8]) -> Vec<u8> {
        let m = self.m;
        let mut prod = vec![0u32; 2 * m];
        for (i, &a) in p.iter().enumerate() {
            for (j, &b) in q.iter().enumerate() {
                prod[i + j] += a as u32 * b as u32;
            }
        }
        // Z^d = Z^{d-m} * (Z^m) = -Z^{d-m} * (h_0 + ... + h_{m-1} Z^{m-1})
        for d in (m..2 * m).rev() {
            let c = prod[d] % 4;
            prod[d] = 0;
            if c != 0 {
                for i in 0..m {
                    prod[d - m + i] += (4 - c) * self.h[i] as u32;
                }
            }
        }
        prod[..m].iter().map(|&c| (c % 4) as u8).collect()
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Vec<u8> {
        unit(self.m)
    }

    /// The element 2.
    pub fn two(&self) -> Vec<u8> {
        let mut v = unit(self.m);
        v[0] = 2;
        v
    }
}

fn unit(m: usize) -> Vec<u8> {
    let mut v = vec![0; m];
    v[0] = 1;
    v
}

fn times_z(p: &[u8], h: &[u8]) -> Vec<u8> {
    let m = p.len();
    let top = p[m - 1];
    let mut out = vec![0u8; m];
    out[1..].copy_from_slice(&p[..m - 1]);
    for i in 0..m {
        out[i] = (out[i] + (4 - top) * h[i]) & 3;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nr() -> GaloisRing {
        GaloisRing::preset(3).unwrap()
    }

    #[test]
    fn xi_cubed_reduces_modulo_h() {
        // Z^3 = -(3 + Z + 2Z^2) = 1 + 3Z + 2Z^2
        assert_eq!(nr().xi_pow()[3], vec![1, 3, 2]);
    }

    #[test]
    fn xi_has_full_order() {
        let gr = nr();
        let pows = gr.xi_pow();
        assert_eq!(pows.len(), 7);
        for i in 0..7 {
            for j in 0..i {
                assert_ne!(pows[i], pows[j]);
            }
        }
        // ξ^7 = ξ^6 * ξ = 1
        assert_eq!(gr.mul(&pows[6], &pows[1]), gr.one());
    }

    #[test]
    fn all_presets_build() {
        for (m, h) in PRESET_POLYNOMIALS {
            let gr = GaloisRing::new(h, m).unwrap();
            assert_eq!(gr.len(), 1 << m);
        }
        assert_eq!(GaloisRing::preset(5).unwrap().len(), 32);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(GaloisRing::new(&[3, 1, 2, 3], 3), Err(Error::NonMonic));
        assert!(matches!(GaloisRing::new(&[3, 1, 1], 3), Err(Error::WrongDegree { .. })));
        // Z^3 - 1 over Z4: Z has order 3, not 7
        assert!(matches!(
            GaloisRing::new(&[3, 0, 0, 1], 3),
            Err(Error::BadPrimitiveOrder { order: 3, expected: 7 })
        ));
    }

    #[test]
    fn multiplication_rules() {
        let gr = GaloisRing::preset(5).unwrap();
        let pows = gr.xi_pow();
        let q = pows.len();
        for a in [0, 3, 17, 30] {
            assert_eq!(gr.mul(&gr.one(), &pows[a]), pows[a]);
            for b in [0, 1, 12, 29] {
                assert_eq!(gr.mul(&pows[a], &pows[b]), pows[(a + b) % q]);
            }
        }
        assert_eq!(gr.mul(&gr.two(), &gr.two()), vec![0; 5]);
    }

    #[test]
    fn binary_counterpart_spans_z2m() {
        for m in [3, 5] {
            let gr = GaloisRing::preset(m).unwrap();
            let bar = gr.binary_counterpart();
            assert_eq!(bar[0][0], 1);
            assert!(bar[0][1..].iter().all(|&c| c == 0));
            let mut seen = vec![false; 1 << m];
            seen[0] = true;
            for (p, pb) in gr.xi_pow().iter().zip(bar) {
                assert_eq!(p.iter().map(|c| c & 1).collect::<Vec<_>>(), *pb);
                let idx = pb.iter().enumerate().fold(0, |a, (i, &b)| a | ((b as usize) << i));
                assert!(!seen[idx], "repeated binary power");
                seen[idx] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn every_element_has_two_adic_form() {
        // α = ξ^r + 2ξ^s with r, s ∈ {-∞, 0, ..., N-2}, exhaustively for m = 3
        let gr = nr();
        let mut reps = vec![vec![0u8; 3]];
        reps.extend(gr.xi_pow().iter().cloned());
        let mut seen = std::collections::HashSet::new();
        for r in &reps {
            for s in &reps {
                let v: Vec<u8> = r.iter().zip(s).map(|(a, b)| (a + 2 * b) & 3).collect();
                seen.insert(v);
            }
        }
        assert_eq!(seen.len(), 64);
    }
}
