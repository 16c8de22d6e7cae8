//! Serde helpers: big integers are emitted as decimal strings.

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};

pub(crate) fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub(crate) fn bigs<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
