//! Exact arithmetic over F_p: residues, sparse polynomials, the text parser,
//! q-th root decompositions and a Gröbner-basis ideal engine.

pub mod field;
pub(crate) mod groebner;
pub mod ideal;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod root;

pub use field::{is_prime, FpElement, PrimeField};
pub use ideal::Ideal;
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub use poly::Polynomial;
pub use ring::{Ring, RingConfig};
pub use root::{root_decompose, root_recompose};

/// `groebner_reduce`: canonicalizes the ideal generated by `gens` under `order`.
pub fn groebner_reduce(ring: &Ring, gens: Vec<Polynomial>, order: MonomialOrder) -> crate::error::Result<Ideal> {
    let ideal = Ideal::with_order(ring, gens, order)?;
    ideal.reduced_gb();
    Ok(ideal)
}
