use std::collections::BTreeMap;

use super::{BraidOperator, FusionMatrix};
use crate::qlaurent::LaurentPoly;

/// Sparse vector in `V^{⊗k}`: label tuples to amplitudes, zero entries dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateVector {
    n: usize,
    amps: BTreeMap<Vec<u8>, LaurentPoly>,
}

impl StateVector {
    /// The empty-tuple state with amplitude 1.
    pub fn vacuum(n: usize) -> Self {
        Self::basis(n, &[])
    }

    pub fn basis(n: usize, labels: &[usize]) -> Self {
        let key = labels.iter().map(|&x| x as u8).collect();
        Self {
            n,
            amps: BTreeMap::from([(key, LaurentPoly::one())]),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&[u8], &LaurentPoly)> {
        self.amps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn amplitude(&self, labels: &[usize]) -> LaurentPoly {
        let key: Vec<u8> = labels.iter().map(|&x| x as u8).collect();
        self.amps.get(&key).cloned().unwrap_or_default()
    }

    /// Amplitude of the empty tuple (the scalar value of a closed contraction).
    pub fn scalar(&self) -> LaurentPoly {
        self.amps.get(&Vec::new()).cloned().unwrap_or_default()
    }

    fn collect(n: usize, acc: BTreeMap<Vec<u8>, LaurentPoly>) -> Self {
        Self {
            n,
            amps: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Act with `op` on strands `pos, pos+1`.
    pub fn apply_operator(&self, op: &BraidOperator, pos: usize) -> Self {
        let mut acc: BTreeMap<Vec<u8>, LaurentPoly> = BTreeMap::new();
        for (t, amp) in &self.amps {
            let inp = (t[pos] as usize, t[pos + 1] as usize);
            if let Some(col) = op.column(inp) {
                for ((a, b), c) in col {
                    let mut key = t.clone();
                    key[pos] = *a as u8;
                    key[pos + 1] = *b as u8;
                    *acc.entry(key).or_default() += &(amp * c);
                }
            }
        }
        Self::collect(self.n, acc)
    }

    /// Insert a created pair at `pos`, weighted by creation amplitudes.
    pub fn apply_cup(&self, fusion: &FusionMatrix, pos: usize) -> Self {
        let mut acc: BTreeMap<Vec<u8>, LaurentPoly> = BTreeMap::new();
        for (t, amp) in &self.amps {
            for ((a, b), m) in fusion.creation_entries() {
                let mut key = Vec::with_capacity(t.len() + 2);
                key.extend_from_slice(&t[..pos]);
                key.push(a as u8);
                key.push(b as u8);
                key.extend_from_slice(&t[pos..]);
                *acc.entry(key).or_default() += &(amp * m);
            }
        }
        Self::collect(self.n, acc)
    }

    /// Annihilate strands `pos, pos+1`.
    pub fn apply_cap(&self, fusion: &FusionMatrix, pos: usize) -> Self {
        let mut acc: BTreeMap<Vec<u8>, LaurentPoly> = BTreeMap::new();
        for (t, amp) in &self.amps {
            let m = fusion.annihilation(t[pos] as usize, t[pos + 1] as usize);
            if m.is_zero() {
                continue;
            }
            let mut key = t.clone();
            key.drain(pos..pos + 2);
            *acc.entry(key).or_default() += &(amp * &m);
        }
        Self::collect(self.n, acc)
    }

    pub fn scale(&self, k: &LaurentPoly) -> Self {
        Self::collect(
            self.n,
            self.amps.iter().map(|(t, v)| (t.clone(), v * k)).collect(),
        )
    }
}
