//! The bundled test algebras.
//!
//! Vertices are labelled by integers as strings; arrows point toward the
//! lower label, so `A3` is `1 <-a- 2 <-b- 3`.

use std::sync::Arc;

use crate::quiver::{
    validate_algebra, Algebra, AlgebraDescription, ArrowDescription, FieldDescription,
    RelationDescription, TermDescription,
};

fn arrow(name: &str, from: &str, to: &str) -> ArrowDescription {
    ArrowDescription {
        name: name.into(),
        from: from.into(),
        to: to.into(),
    }
}

fn build(p: u32, vertices: &[&str], arrows: Vec<ArrowDescription>, relations: Vec<RelationDescription>) -> AlgebraDescription {
    AlgebraDescription {
        field: FieldDescription { characteristic: p },
        vertices: vertices.iter().map(|v| v.to_string()).collect(),
        arrows,
        relations,
    }
}

/// `1 <- 2`
pub fn a2_description(p: u32) -> AlgebraDescription {
    build(p, &["1", "2"], vec![arrow("a", "2", "1")], vec![])
}

/// `1 <-a- 2 <-b- 3`, the hereditary algebra of the running example.
pub fn a3_description(p: u32) -> AlgebraDescription {
    build(
        p,
        &["1", "2", "3"],
        vec![arrow("a", "2", "1"), arrow("b", "3", "2")],
        vec![],
    )
}

/// `A3` modulo the composite `3 -> 2 -> 1`.
pub fn a3_rad2_description(p: u32) -> AlgebraDescription {
    let mut d = a3_description(p);
    d.relations.push(RelationDescription {
        terms: vec![TermDescription {
            coeff: 1,
            path: vec!["b".into(), "a".into()],
        }],
    });
    d
}

/// Three arrows into the central vertex `1`.
pub fn d4_description(p: u32) -> AlgebraDescription {
    build(
        p,
        &["1", "2", "3", "4"],
        vec![arrow("a", "2", "1"), arrow("b", "3", "1"), arrow("c", "4", "1")],
        vec![],
    )
}

/// Two parallel arrows `1 <= 2`; infinite representation type.
pub fn kronecker_description(p: u32) -> AlgebraDescription {
    build(
        p,
        &["1", "2"],
        vec![arrow("x", "2", "1"), arrow("y", "2", "1")],
        vec![],
    )
}

fn make(d: AlgebraDescription) -> Arc<Algebra> {
    validate_algebra(&d).expect("bundled algebra is valid")
}

pub fn a2(p: u32) -> Arc<Algebra> {
    make(a2_description(p))
}

pub fn a3(p: u32) -> Arc<Algebra> {
    make(a3_description(p))
}

pub fn a3_rad2(p: u32) -> Arc<Algebra> {
    make(a3_rad2_description(p))
}

pub fn d4(p: u32) -> Arc<Algebra> {
    make(d4_description(p))
}

pub fn kronecker(p: u32) -> Arc<Algebra> {
    make(kronecker_description(p))
}

/// Named corpus algebras, by lookup key.
pub fn by_name(name: &str, p: u32) -> Option<Arc<Algebra>> {
    Some(match name {
        "A2" => a2(p),
        "A3" => a3(p),
        "A3/rad2" => a3_rad2(p),
        "D4" => d4(p),
        "Kronecker" => kronecker(p),
        _ => return None,
    })
}

/// The hereditary corpus algebras with their names.
pub fn hereditary(p: u32) -> Vec<(&'static str, Arc<Algebra>)> {
    vec![("A2", a2(p)), ("A3", a3(p)), ("D4", d4(p))]
}

/// Every representation-finite corpus algebra.
pub fn all_finite(p: u32) -> Vec<(&'static str, Arc<Algebra>)> {
    let mut v = hereditary(p);
    v.push(("A3/rad2", a3_rad2(p)));
    v
}
