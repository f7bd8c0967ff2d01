//! One-dimensional substitutions: legal words, collared letters, the
//! collared substitution and its border-forcing exponent, and the
//! one-dimensional cell complex of collared letters.
//!
//! ```
//! use tilespace::symbolic1d::{border_forcing_k, CollaredAlphabet, SymbolicSubstitution};
//!
//! let fib = SymbolicSubstitution::fibonacci();
//! let alphabet = CollaredAlphabet::new(&fib).unwrap();
//! assert_eq!(alphabet.labels(), ["a1", "b1", "b2", "b3"]);
//! assert_eq!(border_forcing_k(&fib, 8).unwrap(), Some(2));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::apcomplex::{CWComplex, ChainMaps};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicSubstitution {
    rules: BTreeMap<char, String>,
}

impl SymbolicSubstitution {
    /// The alphabet is the set of symbols with a rule.
    pub fn new(rules: BTreeMap<char, String>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::Substitution("no rules".into()));
        }
        for (a, w) in &rules {
            if w.is_empty() {
                return Err(Error::Substitution(format!("the image of {a} is empty")));
            }
            if let Some(c) = w.chars().find(|c| !rules.contains_key(c)) {
                return Err(Error::Substitution(format!(
                    "the image of {a} uses {c}, which has no rule"
                )));
            }
        }
        Ok(SymbolicSubstitution { rules })
    }

    /// Parses lines of the form `a -> ab`. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Substitution(format!("line {}: {m}: {line:?}", i + 1));
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| bad("expected `symbol -> word`"))?;
            let mut lhs = lhs.trim().chars();
            let (Some(a), None) = (lhs.next(), lhs.next()) else {
                return Err(bad("the left side must be a single symbol"));
            };
            let word: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
            if rules.insert(a, word).is_some() {
                return Err(bad("duplicate rule"));
            }
        }
        Self::new(rules)
    }

    /// `a -> b`, `b -> ab`.
    pub fn fibonacci() -> Self {
        Self::parse("a -> b\nb -> ab").expect("valid rules")
    }

    /// `a -> ab`, `b -> ba`.
    pub fn thue_morse() -> Self {
        Self::parse("a -> ab\nb -> ba").expect("valid rules")
    }

    pub fn alphabet(&self) -> impl Iterator<Item = char> + '_ {
        self.rules.keys().copied()
    }

    pub fn image(&self, a: char) -> &str {
        &self.rules[&a]
    }

    pub fn apply(&self, w: &str) -> String {
        w.chars().map(|c| self.image(c)).collect()
    }

    pub fn power(&self, w: &str, k: u32) -> String {
        (0..k).fold(w.to_string(), |w, _| self.apply(&w))
    }

    /// Letter counts: entry (a, b) is the number of `b` in the image of `a`.
    pub fn matrix(&self) -> IntMatrix {
        let letters: Vec<char> = self.alphabet().collect();
        IntMatrix::from_fn(letters.len(), letters.len(), |i, j| {
            BigInt::from(
                self.image(letters[i])
                    .chars()
                    .filter(|c| *c == letters[j])
                    .count(),
            )
        })
    }

    /// Whether some power of the letter-count matrix is positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.rules.len();
        let m = self.matrix();
        let bound = (n - 1) * (n - 1) + 1;
        let mut p = m.clone();
        for _ in 0..bound {
            if (0..n).all(|i| p.row(i).iter().all(|x| *x > BigInt::from(0))) {
                return true;
            }
            p = &p * &m;
        }
        false
    }
}

impl fmt::Display for SymbolicSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, w) in &self.rules {
            writeln!(f, "{a} -> {w}")?;
        }
        Ok(())
    }
}

fn factors_upto(w: &[char], n: usize, out: &mut BTreeSet<String>) -> bool {
    let mut grew = false;
    for len in 1..=n.min(w.len()) {
        for win in w.windows(len) {
            grew |= out.insert(win.iter().collect());
        }
    }
    grew
}

/// The length-`n` factors of the language of `s`: all words occurring in
/// some `s^k(a)`.
pub fn legal_words(s: &SymbolicSubstitution, n: usize) -> Result<BTreeSet<String>> {
    if n == 0 {
        return Ok(BTreeSet::from([String::new()]));
    }
    let mut all: BTreeSet<String> = s.alphabet().map(String::from).collect();
    loop {
        let mut grew = false;
        let current: Vec<String> = all.iter().cloned().collect();
        for w in current {
            let img: Vec<char> = s.apply(&w).chars().collect();
            grew |= factors_upto(&img, n, &mut all);
        }
        if !grew {
            break;
        }
    }
    let words: BTreeSet<String> = all.into_iter().filter(|w| w.chars().count() == n).collect();
    if words.is_empty() {
        return Err(Error::Substitution(format!(
            "no legal word of length {n}: the substitution does not grow"
        )));
    }
    Ok(words)
}

/// A letter with its two neighbours, written `(l)c(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CollaredLetter {
    pub left: char,
    pub core: char,
    pub right: char,
}

impl fmt::Display for CollaredLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}){}({})", self.left, self.core, self.right)
    }
}

/// `{ (l)c(r) : lcr legal }`, in lexicographic order.
pub fn collared_letters(s: &SymbolicSubstitution) -> Result<Vec<CollaredLetter>> {
    Ok(legal_words(s, 3)?
        .iter()
        .map(|w| {
            let c: Vec<char> = w.chars().collect();
            CollaredLetter {
                left: c[0],
                core: c[1],
                right: c[2],
            }
        })
        .collect())
}

/// Collared letters with short names: the core symbol followed by a
/// counter, numbered in order of first appearance in `s^0(a), s^0(b), ...,
/// s^1(a), ...`.
#[derive(Clone, Debug, Serialize)]
pub struct CollaredAlphabet {
    letters: Vec<CollaredLetter>,
    labels: Vec<String>,
}

const LABEL_SCAN_LIMIT: usize = 1 << 16;

impl CollaredAlphabet {
    pub fn new(s: &SymbolicSubstitution) -> Result<Self> {
        let all: BTreeSet<CollaredLetter> = collared_letters(s)?.into_iter().collect();
        let mut order: Vec<CollaredLetter> = Vec::new();
        let mut words: Vec<String> = s.alphabet().map(String::from).collect();
        while order.len() < all.len() && words.iter().any(|w| w.len() < LABEL_SCAN_LIMIT) {
            for w in &words {
                let c: Vec<char> = w.chars().collect();
                for win in c.windows(3) {
                    let l = CollaredLetter {
                        left: win[0],
                        core: win[1],
                        right: win[2],
                    };
                    if all.contains(&l) && !order.contains(&l) {
                        order.push(l);
                    }
                }
            }
            words = words.iter().map(|w| s.apply(w)).collect();
        }
        for l in &all {
            if !order.contains(l) {
                order.push(*l);
            }
        }
        let mut counters: BTreeMap<char, usize> = BTreeMap::new();
        let mut numbered: Vec<(char, usize, CollaredLetter)> = order
            .into_iter()
            .map(|l| {
                let n = counters.entry(l.core).or_default();
                *n += 1;
                (l.core, *n, l)
            })
            .collect();
        numbered.sort();
        let letters = numbered.iter().map(|(_, _, l)| *l).collect();
        let labels = numbered.iter().map(|(c, n, _)| format!("{c}{n}")).collect();
        Ok(CollaredAlphabet { letters, labels })
    }

    /// Letters sorted by label.
    pub fn letters(&self) -> &[CollaredLetter] {
        &self.letters
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, l: &CollaredLetter) -> Option<usize> {
        self.letters.iter().position(|x| x == l)
    }

    pub fn label(&self, l: &CollaredLetter) -> &str {
        self.index(l).map_or("?", |i| &self.labels[i])
    }

    pub fn by_label(&self, label: &str) -> Option<CollaredLetter> {
        self.labels
            .iter()
            .position(|x| x == label)
            .map(|i| self.letters[i])
    }
}

/// The image of a collared letter under `s^k`: the collared letters of
/// `s^k(c)`, and the collared letters just outside it when the images of the
/// neighbours determine them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollaredImage {
    pub letter: CollaredLetter,
    pub power: u32,
    pub left_flank: Option<CollaredLetter>,
    pub core: Vec<CollaredLetter>,
    pub right_flank: Option<CollaredLetter>,
}

impl CollaredImage {
    pub fn forced(&self) -> bool {
        self.left_flank.is_some() && self.right_flank.is_some()
    }

    /// Written with labels, e.g. `(b3)a1b1(b2)`; an undetermined flank
    /// shows as `(?)`.
    pub fn render(&self, a: &CollaredAlphabet) -> String {
        let flank = |f: &Option<CollaredLetter>| f.as_ref().map_or("?", |l| a.label(l)).to_string();
        let core: String = self.core.iter().map(|l| a.label(l)).collect();
        format!(
            "({}){}({})",
            flank(&self.left_flank),
            core,
            flank(&self.right_flank)
        )
    }

    /// `σ^k(label)=...`.
    pub fn equation(&self, a: &CollaredAlphabet) -> String {
        let power = match self.power {
            1 => String::new(),
            k => superscript(k),
        };
        format!("σ{power}({})={}", a.label(&self.letter), self.render(a))
    }
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

/// The collared image of `l` under `s^k`.
pub fn collared_image(s: &SymbolicSubstitution, l: &CollaredLetter, k: u32) -> CollaredImage {
    let left: Vec<char> = s.power(&l.left.to_string(), k).chars().collect();
    let core: Vec<char> = s.power(&l.core.to_string(), k).chars().collect();
    let right: Vec<char> = s.power(&l.right.to_string(), k).chars().collect();
    let word: Vec<char> = left.iter().chain(&core).chain(&right).copied().collect();
    let at = |i: usize| CollaredLetter {
        left: word[i - 1],
        core: word[i],
        right: word[i + 1],
    };
    let start = left.len();
    CollaredImage {
        letter: *l,
        power: k,
        left_flank: (left.len() >= 2).then(|| at(start - 1)),
        core: (start..start + core.len()).map(at).collect(),
        right_flank: (right.len() >= 2).then(|| at(start + core.len())),
    }
}

/// Collared images of every collared letter under `s^k`, in label order.
pub fn collared_substitution(
    s: &SymbolicSubstitution,
    a: &CollaredAlphabet,
    k: u32,
) -> Vec<CollaredImage> {
    a.letters()
        .iter()
        .map(|l| collared_image(s, l, k))
        .collect()
}

/// The least `k <= kmax` for which the image under `s^k` of every collared
/// letter determines both collared flanks.
pub fn border_forcing_k(s: &SymbolicSubstitution, kmax: u32) -> Result<Option<u32>> {
    let letters = collared_letters(s)?;
    Ok((0..=kmax).find(|&k| letters.iter().all(|l| collared_image(s, l, k).forced())))
}

/// The collared-letter complex: one edge per collared letter, one vertex
/// per class of letter junctions, and the maps induced by `s`.
#[derive(Clone, Debug, Serialize)]
pub struct ApGraph {
    pub alphabet: CollaredAlphabet,
    pub complex: CWComplex,
    pub maps: ChainMaps,
}

/// Builds the complex. The right end of `(l)c(r)` is glued to the left end
/// of `(c)r(y)` whenever `lcry` is legal; vertices are the resulting classes,
/// named by the two letters meeting there.
pub fn ap_graph_1d(s: &SymbolicSubstitution) -> Result<ApGraph> {
    let alphabet = CollaredAlphabet::new(s)?;
    let letters = alphabet.letters().to_vec();
    let n = letters.len();
    // Ends: 2i is the left end of letter i, 2i+1 its right end.
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let idx = |l: &CollaredLetter| alphabet.index(l).expect("collared letter");
    for w in legal_words(s, 4)? {
        let c: Vec<char> = w.chars().collect();
        let a = idx(&CollaredLetter {
            left: c[0],
            core: c[1],
            right: c[2],
        });
        let b = idx(&CollaredLetter {
            left: c[1],
            core: c[2],
            right: c[3],
        });
        let (ra, rb) = (find(&mut parent, 2 * a + 1), find(&mut parent, 2 * b));
        parent[ra] = rb;
    }
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    for end in 0..2 * n {
        let r = find(&mut parent, end);
        let l = &letters[end / 2];
        let name = if end % 2 == 0 {
            format!("{}{}", l.left, l.core)
        } else {
            format!("{}{}", l.core, l.right)
        };
        names.entry(r).or_insert(name);
    }
    let mut classes: Vec<(String, usize)> = names.into_iter().map(|(r, n)| (n, r)).collect();
    classes.sort();
    let mut vertex_labels = Vec::with_capacity(classes.len());
    for (i, (name, _)) in classes.iter().enumerate() {
        let same = classes.iter().filter(|(m, _)| m == name).count();
        let k = classes[..=i].iter().filter(|(m, _)| m == name).count();
        vertex_labels.push(if same == 1 {
            name.clone()
        } else {
            format!("{name}#{k}")
        });
    }
    let class_of: Vec<usize> = (0..2 * n)
        .map(|end| {
            let r = find(&mut parent, end);
            classes
                .iter()
                .position(|(_, root)| *root == r)
                .expect("named class")
        })
        .collect();

    let v = vertex_labels.len();
    let mut b1 = IntMatrix::zeros(v, n);
    for i in 0..n {
        let (a, b) = (class_of[2 * i], class_of[2 * i + 1]);
        if a != b {
            b1[(a, i)] -= 1;
            b1[(b, i)] += 1;
        }
    }
    let complex = CWComplex::with_labels(
        vertex_labels,
        alphabet.labels().to_vec(),
        Vec::new(),
        b1,
        IntMatrix::zeros(n, 0),
    )?;

    let mut s1 = IntMatrix::zeros(n, n);
    let mut s0: Vec<Option<usize>> = vec![None; v];
    for (i, l) in letters.iter().enumerate() {
        let img = collared_image(s, l, 1);
        for c in &img.core {
            s1[(i, idx(c))] += 1;
        }
        let last = idx(img.core.last().expect("nonempty image"));
        let target = class_of[2 * last + 1];
        let source = class_of[2 * i + 1];
        match s0[source] {
            None => s0[source] = Some(target),
            Some(t) if t == target => {}
            Some(_) => {
                return Err(Error::Substitution(format!(
                    "the image of vertex {} is not well defined",
                    complex.vertex_labels[source]
                )))
            }
        }
    }
    let s0 = IntMatrix::from_fn(v, v, |i, j| BigInt::from(u8::from(s0[i] == Some(j))));
    let maps = ChainMaps {
        s2: IntMatrix::zeros(0, 0),
        s1,
        s0,
    };
    maps.check_commutes(&complex)?;
    Ok(ApGraph {
        alphabet,
        complex,
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn parsing() {
        let s = SymbolicSubstitution::parse("# fib\na -> b\n\nb -> a b\n").unwrap();
        assert_eq!(s, SymbolicSubstitution::fibonacci());
        assert!(SymbolicSubstitution::parse("a -> ac").is_err());
        assert!(SymbolicSubstitution::parse("a -> ").is_err());
        assert!(SymbolicSubstitution::parse("ab -> a").is_err());
        assert!(SymbolicSubstitution::parse("a b").is_err());
        assert!(SymbolicSubstitution::parse("a -> a\na -> a").is_err());
    }

    #[test]
    fn fibonacci_words() {
        let fib = SymbolicSubstitution::fibonacci();
        assert_eq!(legal_words(&fib, 1).unwrap(), set(&["a", "b"]));
        assert_eq!(legal_words(&fib, 2).unwrap(), set(&["ab", "ba", "bb"]));
        let three = legal_words(&fib, 3).unwrap();
        assert_eq!(three, set(&["aba", "abb", "bab", "bba"]));
        assert!(!three.contains("bbb"));
        assert!(fib.is_primitive());
    }

    #[test]
    fn degenerate_substitutions() {
        let s = SymbolicSubstitution::parse("a -> aa").unwrap();
        assert_eq!(legal_words(&s, 2).unwrap(), set(&["aa"]));
        assert_eq!(
            collared_letters(&s).unwrap(),
            vec![CollaredLetter {
                left: 'a',
                core: 'a',
                right: 'a'
            }]
        );
        assert_eq!(border_forcing_k(&s, 8).unwrap(), Some(1));
        let id = SymbolicSubstitution::parse("a -> a").unwrap();
        assert!(legal_words(&id, 2).is_err());
    }

    #[test]
    fn fibonacci_collared_letters() {
        let fib = SymbolicSubstitution::fibonacci();
        let a = CollaredAlphabet::new(&fib).unwrap();
        let shown: Vec<String> = a.letters().iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, ["(b)a(b)", "(a)b(b)", "(b)b(a)", "(a)b(a)"]);
        assert_eq!(a.labels(), ["a1", "b1", "b2", "b3"]);
    }

    #[test]
    fn fibonacci_square_images() {
        let fib = SymbolicSubstitution::fibonacci();
        let a = CollaredAlphabet::new(&fib).unwrap();
        let eqs: Vec<String> = collared_substitution(&fib, &a, 2)
            .iter()
            .map(|i| i.equation(&a))
            .collect();
        assert_eq!(
            eqs,
            [
                "σ²(a1)=(b3)a1b1(b2)",
                "σ²(b1)=(b1)b2a1b1(b2)",
                "σ²(b2)=(b1)b2a1b3(a1)",
                "σ²(b3)=(b1)b2a1b3(a1)",
            ]
        );
        for img in collared_substitution(&fib, &a, 0) {
            assert_eq!(img.core, vec![img.letter]);
        }
    }

    #[test]
    fn forcing_exponents() {
        let fib = SymbolicSubstitution::fibonacci();
        assert_eq!(border_forcing_k(&fib, 8).unwrap(), Some(2));
        assert_eq!(border_forcing_k(&fib, 1).unwrap(), None);
        let tm = SymbolicSubstitution::thue_morse();
        let k = border_forcing_k(&tm, 8).unwrap().unwrap();
        // Brute force: every legal 3-word has images of both neighbours of
        // length at least 2 exactly when k >= 1.
        let oracle = (0..=8u32)
            .find(|&k| {
                legal_words(&tm, 3).unwrap().iter().all(|w| {
                    let c: Vec<char> = w.chars().collect();
                    tm.power(&c[0].to_string(), k).len() >= 2
                        && tm.power(&c[2].to_string(), k).len() >= 2
                })
            })
            .unwrap();
        assert_eq!(k, oracle);
    }

    #[test]
    fn fibonacci_graph() {
        let fib = SymbolicSubstitution::fibonacci();
        let g = ap_graph_1d(&fib).unwrap();
        assert_eq!(g.complex.edge_labels, ["a1", "b1", "b2", "b3"]);
        assert_eq!(g.complex.vertex_labels, ["ab", "ba", "bb"]);
        assert_eq!(g.complex.euler_characteristic(), -1);
        let s1 = g.maps.s1.to_i64_rows().unwrap();
        assert_eq!(
            s1,
            vec![
                vec![0, 0, 1, 0],
                vec![1, 0, 0, 1],
                vec![1, 1, 0, 0],
                vec![1, 1, 0, 0],
            ]
        );
    }

    fn arb_substitution() -> impl Strategy<Value = SymbolicSubstitution> {
        let word = proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 1..4);
        (word.clone(), word).prop_filter_map("growing", |(x, y)| {
            let mut rules = BTreeMap::new();
            rules.insert('a', x.into_iter().collect::<String>());
            rules.insert('b', y.into_iter().collect::<String>());
            let s = SymbolicSubstitution::new(rules).ok()?;
            (s.image('a').len() >= 2 && s.image('b').len() >= 2).then_some(s)
        })
    }

    proptest! {
        #[test]
        fn legal_words_are_factor_closed(s in arb_substitution(), n in 2usize..6) {
            let long = legal_words(&s, n).unwrap();
            let short = legal_words(&s, n - 1).unwrap();
            for w in &long {
                prop_assert!(short.contains(&w[..n - 1]));
                prop_assert!(short.contains(&w[1..]));
            }
        }

        #[test]
        fn collared_images_compose(s in arb_substitution()) {
            // Core images of the square equal the images of the core images.
            for l in collared_letters(&s).unwrap() {
                let two = collared_image(&s, &l, 2);
                let one = collared_image(&s, &l, 1);
                let composed: Vec<CollaredLetter> = one
                    .core
                    .iter()
                    .flat_map(|c| collared_image(&s, c, 1).core)
                    .collect();
                prop_assert_eq!(two.core, composed);
            }
        }

        #[test]
        fn forcing_exponent_is_minimal(s in arb_substitution()) {
            if let Some(k) = border_forcing_k(&s, 6).unwrap() {
                if k > 0 {
                    prop_assert_eq!(border_forcing_k(&s, k - 1).unwrap(), None);
                }
            }
        }
    }
}
