//! Shared test oracles, independent of the library's algorithms.
//!
//! The word-norm oracle enumerates every generator word up to a weight
//! budget over a standalone model of each group, with no window, no
//! priority queue, and no shared code with the Dijkstra implementation.

#![allow(dead_code)]

use coarsekit::Q;
use std::collections::BTreeMap;

/// A group given by a closed-form multiplication on labels, plus
/// weighted generators. Labels must match the window's labels.
pub struct GroupModel {
    pub mul: Box<dyn Fn(&str, &str) -> String>,
    pub identity: String,
    pub gens: Vec<(String, Q)>,
}

impl GroupModel {
    pub fn integers() -> Self {
        GroupModel {
            mul: Box::new(|a, b| {
                (a.parse::<i64>().unwrap() + b.parse::<i64>().unwrap()).to_string()
            }),
            identity: "0".into(),
            gens: vec![("1".into(), Q::ONE), ("-1".into(), Q::ONE)],
        }
    }

    pub fn integers_with_steps(steps: &[(i64, Q)]) -> Self {
        let mut gens = Vec::new();
        for (s, w) in steps {
            gens.push((s.to_string(), w.clone()));
            gens.push(((-s).to_string(), w.clone()));
        }
        GroupModel {
            mul: Box::new(|a, b| {
                (a.parse::<i64>().unwrap() + b.parse::<i64>().unwrap()).to_string()
            }),
            identity: "0".into(),
            gens,
        }
    }

    pub fn grid() -> Self {
        let parse = |s: &str| -> (i64, i64) {
            let mut it = s.split(';').map(|v| v.parse::<i64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        };
        GroupModel {
            mul: Box::new(move |a, b| {
                let (ax, ay) = parse(a);
                let (bx, by) = parse(b);
                format!("{};{}", ax + bx, ay + by)
            }),
            identity: "0;0".into(),
            gens: vec![
                ("1;0".into(), Q::ONE),
                ("-1;0".into(), Q::ONE),
                ("0;1".into(), Q::ONE),
                ("0;-1".into(), Q::ONE),
            ],
        }
    }

    pub fn cyclic(n: i64) -> Self {
        GroupModel {
            mul: Box::new(move |a, b| {
                ((a.parse::<i64>().unwrap() + b.parse::<i64>().unwrap()) % n).to_string()
            }),
            identity: "0".into(),
            gens: vec![("1".into(), Q::ONE), ((n - 1).to_string(), Q::ONE)],
        }
    }

    /// Reflections written `sk` = s * r^k, rotations `rk`.
    pub fn dihedral(n: i64) -> Self {
        let parse = move |l: &str| -> (i64, i64) {
            let (eps, k) = l.split_at(1);
            (if eps == "s" { 1 } else { 0 }, k.parse().unwrap())
        };
        let show = move |eps: i64, k: i64| {
            let k = ((k % n) + n) % n;
            if eps % 2 == 1 {
                format!("s{k}")
            } else {
                format!("r{k}")
            }
        };
        GroupModel {
            mul: Box::new(move |a, b| {
                let (eps, k) = parse(a);
                let (delta, m) = parse(b);
                let sign = if delta % 2 == 1 { -1 } else { 1 };
                show(eps + delta, sign * k + m)
            }),
            identity: "r0".into(),
            gens: vec![
                ("r1".into(), Q::ONE),
                (show(0, n - 1), Q::ONE),
                ("s0".into(), Q::ONE),
            ],
        }
    }

    /// Free group on two letters; reduced words, identity "1".
    pub fn free2() -> Self {
        let flip = |c: char| {
            if c.is_ascii_lowercase() {
                c.to_ascii_uppercase()
            } else {
                c.to_ascii_lowercase()
            }
        };
        GroupModel {
            mul: Box::new(move |a, b| {
                let mut out: Vec<char> = if a == "1" { vec![] } else { a.chars().collect() };
                let b = if b == "1" { "" } else { b };
                for c in b.chars() {
                    if out.last().is_some_and(|&l| flip(l) == c) {
                        out.pop();
                    } else {
                        out.push(c);
                    }
                }
                if out.is_empty() {
                    "1".into()
                } else {
                    out.into_iter().collect()
                }
            }),
            identity: "1".into(),
            gens: vec![
                ("a".into(), Q::ONE),
                ("A".into(), Q::ONE),
                ("b".into(), Q::ONE),
                ("B".into(), Q::ONE),
            ],
        }
    }
}

/// Minimum word weight per reachable element, by exhaustive enumeration
/// of all generator words of weight at most `budget`.
pub fn brute_force_norms(model: &GroupModel, budget: &Q) -> BTreeMap<String, Q> {
    let mut best: BTreeMap<String, Q> = BTreeMap::new();
    fn walk(
        model: &GroupModel,
        budget: &Q,
        best: &mut BTreeMap<String, Q>,
        at: String,
        weight: Q,
    ) {
        match best.get(&at) {
            Some(b) if *b <= weight => return, // a cheaper word already got here
            _ => {
                best.insert(at.clone(), weight.clone());
            }
        }
        for (s, w) in &model.gens {
            let nw = &weight + w;
            if &nw <= budget {
                walk(model, budget, best, (model.mul)(&at, s), nw);
            }
        }
    }
    walk(model, budget, &mut best, model.identity.clone(), Q::ZERO);
    best
}
