//! Invariants exercised by the fuzz targets and by the corpus replay test.
//! Each function accepts arbitrary bytes and panics only when a parsed
//! document fails to reach a canonical fixed point.

use crate::format::{parse_claim, parse_instance, parse_psdp_result, parse_result};

fn fixed_point<T>(bytes: &[u8], parse: impl Fn(&[u8]) -> Option<T>, emit: impl Fn(&T) -> String) {
    let Some(doc) = parse(bytes) else { return };
    let first = emit(&doc);
    let again = parse(first.as_bytes()).expect("canonical output must parse");
    assert_eq!(emit(&again), first, "canonical output is not a fixed point");
}

pub fn instance(bytes: &[u8]) {
    fixed_point(bytes, |b| parse_instance(b).ok(), |d| d.to_canonical());
}

pub fn claim(bytes: &[u8]) {
    fixed_point(bytes, |b| parse_claim(b).ok(), |d| d.to_canonical());
}

pub fn result(bytes: &[u8]) {
    fixed_point(bytes, |b| parse_result(b).ok(), |d| d.to_canonical());
}

pub fn psdp_result(bytes: &[u8]) {
    fixed_point(bytes, |b| parse_psdp_result(b).ok(), |d| d.to_canonical());
}
