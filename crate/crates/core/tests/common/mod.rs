#![allow(dead_code)]

use std::sync::OnceLock;

use spdesc::{enumerate_sp, parse_term, SpTerm};

pub fn t(s: &str) -> SpTerm {
    parse_term(s).unwrap()
}

/// Forbidden sets exercised end to end.
pub fn catalog() -> Vec<Vec<SpTerm>> {
    let diamond = "C(*,A(*,*),*)";
    [
        vec!["C(*,*)"],
        vec!["A(*,*)"],
        vec!["C(*,*,*)"],
        vec!["A(*,*,*)"],
        vec!["C(*,A(*,*))"],
        vec!["C(*,*,*)", "C(A(*,*),A(*,*))"],
        vec!["A(*,*,*)", "A(*,C(*,*))"],
        vec!["C(*,*,*)", "A(*,*,*)"],
        vec![diamond],
        vec![diamond, "A(*,*,*,*)"],
    ]
    .into_iter()
    .map(|f| f.into_iter().map(t).collect())
    .collect()
}

/// All canonical terms with at most `n` points, cached per bound.
pub fn terms_upto(n: usize) -> &'static [SpTerm] {
    static CACHE: [OnceLock<Vec<SpTerm>>; 10] = [const { OnceLock::new() }; 10];
    CACHE[n].get_or_init(|| enumerate_sp(n).unwrap())
}
