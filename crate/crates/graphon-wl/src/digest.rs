//! Hash digests of colors and fingerprints.
//!
//! A color's digest hashes its descriptor with every referenced color replaced
//! by that color's digest, so digests do not depend on interning order and can
//! be compared across separate runs.

use graphon_wl_core::refinement::{ColorTable, Descriptor, Fingerprint};
use graphon_wl_core::Rational;
use sha2::{Digest, Sha256};

pub type Hash = [u8; 32];

fn finish(h: Sha256) -> Hash {
    let mut out = [0u8; 32];
    out.copy_from_slice(&h.finalize());
    out
}

fn put_len(h: &mut Sha256, n: usize) {
    h.update((n as u64).to_le_bytes());
}

fn put_rational(h: &mut Sha256, q: &Rational) {
    let s = q.to_string();
    put_len(h, s.len());
    h.update(s.as_bytes());
}

/// Memoized digests of the colors in one table.
pub struct ColorDigests<'a> {
    table: &'a ColorTable,
    memo: Vec<Option<Hash>>,
}

impl<'a> ColorDigests<'a> {
    pub fn new(table: &'a ColorTable) -> Self {
        ColorDigests { table, memo: vec![None; table.len()] }
    }

    pub fn color(&mut self, id: u32) -> Hash {
        if let Some(d) = self.memo[id as usize] {
            return d;
        }
        let mut h = Sha256::new();
        match self.table.descriptor(id).clone() {
            Descriptor::Unit => h.update([0u8]),
            Descriptor::Weights(ws) => {
                h.update([1u8]);
                put_len(&mut h, ws.len());
                for w in &ws {
                    put_rational(&mut h, w);
                }
            }
            Descriptor::AtomicType(ts) => {
                h.update([2u8]);
                put_len(&mut h, ts.len());
                h.update(&ts);
            }
            Descriptor::Refined { prev, parts } => {
                h.update([3u8]);
                h.update(self.color(prev));
                put_len(&mut h, parts.len());
                for part in &parts {
                    // Sorted by digest so the hash ignores color numbering.
                    let mut entries: Vec<(Hash, &Rational)> = part.iter().map(|(c, q)| (self.color(*c), q)).collect();
                    entries.sort();
                    put_len(&mut h, entries.len());
                    for (d, q) in entries {
                        h.update(d);
                        put_rational(&mut h, q);
                    }
                }
            }
        }
        let d = finish(h);
        self.memo[id as usize] = Some(d);
        d
    }

    /// Root of a hash chain over rounds; each round hashes its
    /// (color digest, mass) pairs in digest order.
    pub fn fingerprint(&mut self, fp: &Fingerprint) -> Hash {
        let mut root = Sha256::new();
        put_len(&mut root, fp.rounds.len());
        for round in &fp.rounds {
            let mut entries: Vec<(Hash, &Rational)> = round.iter().map(|(c, q)| (self.color(*c), q)).collect();
            entries.sort();
            let mut h = Sha256::new();
            put_len(&mut h, entries.len());
            for (d, q) in entries {
                h.update(d);
                put_rational(&mut h, q);
            }
            root.update(finish(h));
        }
        finish(root)
    }
}

pub fn fingerprint_digest(table: &ColorTable, fp: &Fingerprint) -> String {
    hex::encode(ColorDigests::new(table).fingerprint(fp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphon_wl_core::refinement::{refine_jointly, Algorithm, ModeFlag};
    use graphon_wl_core::{MultiGraph, StepGraphon};

    fn graphon(g: &MultiGraph) -> StepGraphon {
        StepGraphon::from_graph(g).unwrap()
    }

    #[test]
    fn digests_ignore_interning_order() {
        let a = graphon(&MultiGraph::path(4));
        let b = graphon(&MultiGraph::cycle(4));
        let algo = Algorithm::ColorRefinement(ModeFlag::Graph);
        let ab = refine_jointly(&[&a, &b], algo).unwrap();
        let ba = refine_jointly(&[&b, &a], algo).unwrap();
        let alone = refine_jointly(&[&a], algo).unwrap();
        let d = |run: &graphon_wl_core::refinement::RefinementRun, i: usize| {
            fingerprint_digest(&run.table, &run.fingerprints[i])
        };
        assert_eq!(d(&ab, 0), d(&ba, 1));
        assert_eq!(d(&ab, 0), d(&alone, 0));
        assert_ne!(d(&ab, 0), d(&ab, 1));
        assert_eq!(d(&ab, 0).len(), 64);
    }

    #[test]
    fn relabeled_graphs_share_digests() {
        let g = MultiGraph::simple(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let h = g.relabel(&[3, 0, 4, 1, 2]);
        let algo = Algorithm::Oblivious { k: 2, mode: ModeFlag::Graph };
        let r1 = refine_jointly(&[&graphon(&g)], algo).unwrap();
        let r2 = refine_jointly(&[&graphon(&h)], algo).unwrap();
        assert_eq!(
            fingerprint_digest(&r1.table, &r1.fingerprints[0]),
            fingerprint_digest(&r2.table, &r2.fingerprints[0])
        );
    }
}
