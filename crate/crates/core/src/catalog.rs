//! Built-in example fans, shipped as JSON documents under `data/`.

use num_bigint::BigInt;

use crate::fan::Fan;

pub const P1_JSON: &str = include_str!("../data/p1.json");
pub const P2_JSON: &str = include_str!("../data/p2.json");
pub const P3_JSON: &str = include_str!("../data/p3.json");
pub const P1XP1_JSON: &str = include_str!("../data/p1xp1.json");
pub const BLOWUP_P2_JSON: &str = include_str!("../data/blowup_p2.json");

fn load(json: &str) -> Fan {
    Fan::from_json(json).expect("bundled fan documents parse")
}

pub fn projective_line() -> Fan {
    load(P1_JSON)
}

pub fn projective_plane() -> Fan {
    load(P2_JSON)
}

pub fn projective_space_3() -> Fan {
    load(P3_JSON)
}

pub fn p1_x_p1() -> Fan {
    load(P1XP1_JSON)
}

/// Blow-up of the projective plane at a torus-fixed point; rays
/// `(1,0), (1,1), (0,1), (-1,-1)`.
pub fn blowup_p2() -> Fan {
    load(BLOWUP_P2_JSON)
}

/// Every shipped fan, with a short name.
pub fn all() -> Vec<(&'static str, Fan)> {
    vec![
        ("P1", projective_line()),
        ("P2", projective_plane()),
        ("P3", projective_space_3()),
        ("P1xP1", p1_x_p1()),
        ("Bl1P2", blowup_p2()),
    ]
}

/// Coefficients on [`blowup_p2`] of the divisor whose polytope is the
/// quadrilateral with vertices `(0,k), (0,l), (k,0), (l,0)`.
pub fn pkl_divisor(k: i64, l: i64) -> Vec<BigInt> {
    [0, -k, 0, l].into_iter().map(BigInt::from).collect()
}
