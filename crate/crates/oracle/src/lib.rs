//! Dense linear-algebra reference computations for graded ideals.
//!
//! Works on raw term lists (exponent vector, coefficient mod p) and knows
//! nothing about Groebner bases. For ideals generated by polynomials that are
//! homogeneous for a positive weight vector, membership in a single degree is
//! a finite linear-algebra question: `f ∈ I` iff `f` lies in the span of all
//! products `m * g` of total weight `deg f`.

use std::collections::HashMap;

pub type Terms = Vec<(Vec<u32>, u64)>;

fn weight(exps: &[u32], weights: &[u32]) -> u64 {
    exps.iter()
        .zip(weights)
        .map(|(&e, &w)| e as u64 * w as u64)
        .sum()
}

/// Weighted degree of a nonzero weighted-homogeneous polynomial.
pub fn homogeneous_degree(f: &Terms, weights: &[u32]) -> Option<u64> {
    let mut degs = f
        .iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, _)| weight(e, weights));
    let d = degs.next()?;
    degs.all(|x| x == d).then_some(d)
}

/// All exponent vectors of the given weighted degree.
pub fn monomials_of_degree(weights: &[u32], degree: u64) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], left: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&w, rest)) = weights.split_first() else {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        let w = w as u64;
        if rest.is_empty() {
            if left % w == 0 {
                prefix.push((left / w) as u32);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for e in 0..=left / w {
            prefix.push(e as u32);
            go(rest, left - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, degree, &mut Vec::new(), &mut out);
    out
}

/// Row-echelon accumulator over F_p keyed by pivot column.
struct Echelon {
    p: u64,
    pivots: HashMap<usize, Vec<u64>>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Self {
            p,
            pivots: HashMap::new(),
        }
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Reduces `row` against the stored pivots; returns its first nonzero column.
    fn reduce(&self, row: &mut [u64]) -> Option<usize> {
        for col in 0..row.len() {
            if row[col] == 0 {
                continue;
            }
            match self.pivots.get(&col) {
                Some(piv) => {
                    let factor = row[col];
                    for (r, &v) in row.iter_mut().zip(piv).skip(col) {
                        *r = (*r + self.p - factor * v % self.p) % self.p;
                    }
                }
                None => return Some(col),
            }
        }
        None
    }

    fn insert(&mut self, mut row: Vec<u64>) {
        if let Some(col) = self.reduce(&mut row) {
            let inv = self.inv(row[col]);
            row.iter_mut().for_each(|v| *v = *v * inv % self.p);
            self.pivots.insert(col, row);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn dense(f: &Terms, index: &HashMap<Vec<u32>, usize>, shift: &[u32], p: u64) -> Vec<u64> {
    let mut row = vec![0u64; index.len()];
    for (e, c) in f {
        let m: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
        let col = index[&m];
        row[col] = (row[col] + c % p) % p;
    }
    row
}

/// The degree-`degree` piece of the ideal, reduced to echelon form.
fn ideal_piece(
    p: u64,
    weights: &[u32],
    gens: &[Terms],
    degree: u64,
    columns: &[Vec<u32>],
) -> Echelon {
    let index: HashMap<Vec<u32>, usize> = columns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut ech = Echelon::new(p);
    for g in gens {
        let Some(dg) = homogeneous_degree(g, weights) else {
            panic!("generator is not weighted-homogeneous")
        };
        if dg > degree {
            continue;
        }
        for shift in monomials_of_degree(weights, degree - dg) {
            ech.insert(dense(g, &index, &shift, p));
        }
    }
    ech
}

/// `f ∈ (gens)` for weighted-homogeneous `f` and generators.
pub fn homogeneous_member(p: u64, weights: &[u32], gens: &[Terms], f: &Terms) -> bool {
    let Some(d) = homogeneous_degree(f, weights) else {
        return f.iter().all(|(_, c)| c % p == 0);
    };
    let columns = monomials_of_degree(weights, d);
    let ech = ideal_piece(p, weights, gens, d, &columns);
    let index: HashMap<Vec<u32>, usize> = columns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut row = dense(f, &index, &vec![0; weights.len()], p);
    ech.reduce(&mut row).is_none()
}

/// `dim_K (S/I)_d` for every degree until the quotient vanishes, for an
/// ideal of finite colength generated by weighted-homogeneous polynomials.
/// Returns `None` if the quotient has not vanished by `max_degree`.
pub fn graded_colength(p: u64, weights: &[u32], gens: &[Terms], max_degree: u64) -> Option<u128> {
    let wmax = *weights.iter().max().expect("at least one variable") as u64;
    let mut total = 0u128;
    let mut zero_run = 0u64;
    for d in 0..=max_degree {
        let columns = monomials_of_degree(weights, d);
        let ech = ideal_piece(p, weights, gens, d, &columns);
        let dim = (columns.len() - ech.rank()) as u128;
        total += dim;
        // the quotient is generated in weights at most wmax, so a run of
        // wmax empty degrees ends it
        zero_run = if dim == 0 { zero_run + 1 } else { 0 };
        if zero_run >= wmax {
            return Some(total);
        }
    }
    None
}

/// `λ(S/I)` for a monomial ideal by direct enumeration of the box
/// `[0, bound)^n`, where every variable's pure power `x_i^bound` lies in `I`.
pub fn monomial_colength(gens: &[Vec<u32>], bound: u32, n: usize) -> u128 {
    let mut count = 0u128;
    let mut e = vec![0u32; n];
    loop {
        if !gens.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            e[i] += 1;
            if e[i] < bound {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Raises every exponent of `f` to `q` times itself (Frobenius on F_p).
pub fn frobenius(f: &Terms, q: u32) -> Terms {
    f.iter()
        .map(|(e, c)| (e.iter().map(|x| x * q).collect(), *c))
        .collect()
}

pub fn multiply(f: &Terms, g: &Terms, p: u64) -> Terms {
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    for (a, c) in f {
        for (b, d) in g {
            let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let slot = acc.entry(m).or_insert(0);
            *slot = (*slot + c * d) % p;
        }
    }
    let mut out: Terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Terms {
        vec![(e.to_vec(), 1)]
    }

    #[test]
    fn counts_monomials() {
        assert_eq!(monomials_of_degree(&[1, 1, 1], 2).len(), 6);
        assert_eq!(monomials_of_degree(&[1, 2], 3).len(), 2);
    }

    #[test]
    fn simple_membership() {
        let gens = vec![mono(&[2, 0]), mono(&[1, 1])];
        assert!(homogeneous_member(
            5,
            &[1, 1],
            &gens,
            &vec![(vec![3, 0], 1), (vec![2, 1], 4)]
        ));
        assert!(!homogeneous_member(5, &[1, 1], &gens, &mono(&[0, 2])));
        // x^2 - y^2 = (x - y)(x + y)
        let gens = vec![vec![(vec![1, 0], 1), (vec![0, 1], 4)]];
        assert!(homogeneous_member(
            5,
            &[1, 1],
            &gens,
            &vec![(vec![2, 0], 1), (vec![0, 2], 4)]
        ));
    }

    #[test]
    fn colength_of_box() {
        let gens = vec![mono(&[2, 0]), mono(&[0, 3])];
        assert_eq!(graded_colength(3, &[1, 1], &gens, 20), Some(6));
        assert_eq!(monomial_colength(&[vec![2, 0], vec![0, 3]], 3, 2), 6);
    }
}
