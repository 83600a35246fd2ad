use toricode_core::normal_form::frame_key;
use toricode_core::{Point, UnimodularMap};

fn cone_key(d1: Point, d2: Point) -> (i64, i64) {
    frame_key(d1, d2).min(frame_key(d2, d1))
}

// Oracle: cones equivalent iff some small unimodular matrix maps the pair
// onto the pair (in either order).
fn cone_equiv(a: (Point, Point), b: (Point, Point)) -> bool {
    let r = 8i64;
    for m11 in -r..=r {
        for m12 in -r..=r {
            for m21 in -r..=r {
                for m22 in -r..=r {
                    let det = m11 * m22 - m12 * m21;
                    if det != 1 && det != -1 {
                        continue;
                    }
                    let map = UnimodularMap::linear(m11, m12, m21, m22).unwrap();
                    let (x, y) = (map.apply_vector(a.0), map.apply_vector(a.1));
                    if (x, y) == b || (y, x) == b {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn main() {
    let mut state = 0x12345678u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut pairs = Vec::new();
    while pairs.len() < 40 {
        let d1 = Point::new((next() % 7) as i64 - 3, (next() % 7) as i64 - 3);
        let d2 = Point::new((next() % 7) as i64 - 3, (next() % 7) as i64 - 3);
        if d1.is_zero() || d2.is_zero() || !d1.is_primitive() || !d2.is_primitive() {
            continue;
        }
        if d1.cross(d2) == 0 {
            continue;
        }
        pairs.push((d1, d2));
    }
    let mut bad = 0;
    for i in 0..pairs.len() {
        for j in i..pairs.len() {
            let same_key = cone_key(pairs[i].0, pairs[i].1) == cone_key(pairs[j].0, pairs[j].1);
            let oracle = cone_equiv(pairs[i], pairs[j]);
            if same_key != oracle {
                bad += 1;
                println!(
                    "MISMATCH {:?} {:?}: key {:?} vs {:?}, oracle {}",
                    pairs[i],
                    pairs[j],
                    cone_key(pairs[i].0, pairs[i].1),
                    cone_key(pairs[j].0, pairs[j].1),
                    oracle
                );
            }
        }
    }
    println!("checked {} pairs, {} mismatches", pairs.len() * (pairs.len() + 1) / 2, bad);
}
