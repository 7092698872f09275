//! Inputs shared by the benchmarks.

use std::sync::Arc;

use frobenius_core::{parse_poly, MonomialOrder, PolyRing, Polynomial, PrimeField, RingContext};

/// Cyclic-n system over F_p: the elementary-symmetric-style cyclic sums and
/// `x_0 ... x_{n-1} - 1`.
pub fn cyclic(p: u64, n: usize, order: MonomialOrder) -> Vec<Polynomial> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::new(PrimeField::new(p).unwrap(), &vars, order).unwrap();
    let mut out = Vec::with_capacity(n);
    for k in 1..n {
        let sum: Vec<String> = (0..n)
            .map(|s| {
                (0..k)
                    .map(|j| names[(s + j) % n].clone())
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        out.push(parse_poly(&sum.join(" + "), &ring).unwrap());
    }
    out.push(parse_poly(&format!("{} - 1", names.join("*")), &ring).unwrap());
    out
}

pub fn fermat_cubic(p: u64) -> Arc<RingContext> {
    let ring = PolyRing::new(
        PrimeField::new(p).unwrap(),
        &["z", "u", "v"],
        MonomialOrder::Grevlex,
    )
    .unwrap();
    let f = parse_poly("z^3+u^3+v^3", &ring).unwrap();
    RingContext::quotient(ring, vec![f]).unwrap()
}

#[cfg(test)]
mod tests {
    #[test]
    fn cyclic_shape() {
        let gens = super::cyclic(7, 3, frobenius_core::MonomialOrder::Grevlex);
        assert_eq!(gens.len(), 3);
        assert_eq!(gens[0].to_string(), "x0 + x1 + x2");
    }
}
