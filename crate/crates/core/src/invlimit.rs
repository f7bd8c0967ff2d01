//! Finite truncations of the inverse limit of the substitution, at face
//! resolution, and the shift maps between them.
//!
//! A thread of depth `n` is a face `x_n` together with addresses
//! `p_n, ..., p_1`: `x_(i-1)` is child `p_i` of `x_i`.
//!
//! ```
//! use tilespace::cells::TileId;
//! use tilespace::dataset::PentagonDataset;
//! use tilespace::invlimit::{realize, shift_right, Thread};
//!
//! let d = PentagonDataset::embedded();
//! let t = Thread::new(TileId(1), vec![5]);
//! assert_eq!(realize(&d, &t).unwrap(), vec![TileId(1), TileId(1)]);
//! assert_eq!(shift_right(&d, &t).unwrap(), Thread::new(TileId(1), vec![]));
//! ```

use rand::Rng;
use serde::Serialize;

use crate::cells::TileId;
use crate::dataset::{PentagonDataset, CHILD_COUNT};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Thread {
    pub base: TileId,
    /// `p_n, ..., p_1`, each in `1..=6`.
    pub addresses: Vec<u8>,
}

impl Thread {
    pub fn new(base: TileId, addresses: Vec<u8>) -> Self {
        Thread { base, addresses }
    }

    pub fn depth(&self) -> usize {
        self.addresses.len()
    }
}

fn check_base(d: &PentagonDataset, t: TileId) -> Result<()> {
    if t.0 == 0 || t.0 > d.tiles().len() {
        return Err(Error::MalformedThread(format!("no tile {t}")));
    }
    Ok(())
}

fn child(d: &PentagonDataset, parent: TileId, p: u8) -> Result<TileId> {
    if !(1..=CHILD_COUNT as u8).contains(&p) {
        return Err(Error::MalformedThread(format!(
            "address {p} out of range 1..={CHILD_COUNT}"
        )));
    }
    Ok(d.children(parent)[p as usize - 1])
}

/// The faces `x_0, ..., x_n` of a thread.
pub fn realize(d: &PentagonDataset, t: &Thread) -> Result<Vec<TileId>> {
    check_base(d, t.base)?;
    let mut seq = vec![t.base];
    let mut cur = t.base;
    for &p in &t.addresses {
        cur = child(d, cur, p)?;
        seq.push(cur);
    }
    seq.reverse();
    Ok(seq)
}

/// Drops the top level: the new base is `x_(n-1)`.
pub fn shift_right(d: &PentagonDataset, t: &Thread) -> Result<Thread> {
    check_base(d, t.base)?;
    let (&p, rest) = t.addresses.split_first().ok_or(Error::InsufficientDepth)?;
    Ok(Thread {
        base: child(d, t.base, p)?,
        addresses: rest.to_vec(),
    })
}

/// Adds a level on top: `new_base` must have the old base as child
/// `position`.
pub fn shift_left(
    d: &PentagonDataset,
    t: &Thread,
    new_base: TileId,
    position: u8,
) -> Result<Thread> {
    check_base(d, t.base)?;
    check_base(d, new_base)?;
    let actual = child(d, new_base, position)?;
    if actual != t.base {
        return Err(Error::InvalidExtension {
            parent: new_base.0,
            position: position as usize,
            actual: actual.0,
            expected: t.base.0,
        });
    }
    let mut addresses = Vec::with_capacity(t.depth() + 1);
    addresses.push(position);
    addresses.extend_from_slice(&t.addresses);
    Ok(Thread {
        base: new_base,
        addresses,
    })
}

/// Every (parent, position) with the given tile as that child.
pub fn parents(d: &PentagonDataset, t: TileId) -> Vec<(TileId, u8)> {
    let mut out = Vec::new();
    for rule in d.rules() {
        for (i, c) in rule.children.iter().enumerate() {
            if *c == t {
                out.push((rule.parent, i as u8 + 1));
            }
        }
    }
    out
}

/// Number of threads of the given depth, over one base or all of them.
pub fn thread_count(d: &PentagonDataset, depth: u32, base: Option<TileId>) -> u128 {
    let bases = if base.is_some() {
        1
    } else {
        d.tiles().len() as u128
    };
    bases * (CHILD_COUNT as u128).pow(depth)
}

/// All threads of the given depth, bases in id order and addresses in
/// lexicographic order.
pub fn enumerate_threads(
    d: &PentagonDataset,
    depth: usize,
    base: Option<TileId>,
) -> impl Iterator<Item = Thread> + '_ {
    let bases: Vec<TileId> = match base {
        Some(b) => vec![b],
        None => d.tile_ids().collect(),
    };
    bases.into_iter().flat_map(move |b| {
        let mut next = Some(vec![1u8; depth]);
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut succ = cur.clone();
            let mut i = depth;
            while i > 0 {
                i -= 1;
                if succ[i] < CHILD_COUNT as u8 {
                    succ[i] += 1;
                    next = Some(succ);
                    break;
                }
                succ[i] = 1;
            }
            Some(Thread::new(b, cur))
        })
    })
}

/// A uniformly random thread of the given depth.
pub fn random_thread<R: Rng + ?Sized>(d: &PentagonDataset, depth: usize, rng: &mut R) -> Thread {
    let base = TileId(rng.gen_range(1..=d.tiles().len()));
    let addresses = (0..depth)
        .map(|_| rng.gen_range(1..=CHILD_COUNT as u8))
        .collect();
    Thread::new(base, addresses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> PentagonDataset {
        PentagonDataset::embedded()
    }

    #[test]
    fn realize_examples() {
        let d = data();
        assert_eq!(
            realize(&d, &Thread::new(TileId(22), vec![])).unwrap(),
            vec![TileId(22)]
        );
        assert_eq!(
            realize(&d, &Thread::new(TileId(1), vec![5])).unwrap()[0],
            TileId(1)
        );
        assert_eq!(
            realize(&d, &Thread::new(TileId(29), vec![6])).unwrap()[0],
            TileId(29)
        );
        assert!(matches!(
            realize(&d, &Thread::new(TileId(1), vec![7])),
            Err(Error::MalformedThread(_))
        ));
        assert!(realize(&d, &Thread::new(TileId(37), vec![])).is_err());
    }

    #[test]
    fn shifts() {
        let d = data();
        let t = Thread::new(TileId(22), vec![]);
        assert!(matches!(shift_right(&d, &t), Err(Error::InsufficientDepth)));
        let one = Thread::new(TileId(1), vec![]);
        let up = shift_left(&d, &one, TileId(1), 5).unwrap();
        assert_eq!(shift_right(&d, &up).unwrap(), one);
        let err = shift_left(&d, &t, TileId(1), 5).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidExtension {
                actual: 1,
                expected: 22,
                ..
            }
        ));
    }

    #[test]
    fn counts() {
        let d = data();
        assert_eq!(enumerate_threads(&d, 0, None).count(), 36);
        assert_eq!(enumerate_threads(&d, 1, None).count(), 216);
        assert_eq!(enumerate_threads(&d, 2, Some(TileId(5))).count(), 36);
        assert_eq!(thread_count(&d, 1, None), 216);
        let first: Vec<Thread> = enumerate_threads(&d, 1, Some(TileId(2))).take(2).collect();
        assert_eq!(first[0].addresses, vec![1]);
        assert_eq!(first[1].addresses, vec![2]);
    }

    #[test]
    fn every_tile_has_a_parent() {
        let d = data();
        for t in d.tile_ids() {
            for (p, i) in parents(&d, t) {
                assert_eq!(d.children(p)[i as usize - 1], t);
            }
            assert!(!parents(&d, t).is_empty());
        }
    }
}
