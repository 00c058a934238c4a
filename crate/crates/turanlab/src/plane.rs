//! Similar-triangle hypergraphs from planar point sets.
//!
//! Coordinates live in the field Q(sqrt 3), so membership of lattice points
//! and equality of squared distances are exactly decidable. The equilateral
//! eps = 0 predicate runs entirely in exact arithmetic; generic shapes or
//! positive eps go through interval arithmetic with certified outward
//! rounding and report an explicit indeterminate error instead of guessing
//! when an interval straddles a decision boundary.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::walks::is_fcm_free;

/// An element `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt3", self.a, self.b)
    }
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt3 { a, b }
    }

    pub fn from_integer(n: i64) -> Self {
        QSqrt3::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn rational(num: i64, den: i64) -> Self {
        QSqrt3::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn sqrt3_times(num: i64, den: i64) -> Self {
        QSqrt3::new(
            BigRational::zero(),
            BigRational::new(num.into(), den.into()),
        )
    }

    pub fn zero() -> Self {
        QSqrt3::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QSqrt3::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QSqrt3::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let three = BigRational::from_integer(3.into());
        QSqrt3::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    /// Exact sign: `a + b*sqrt(3)` compared with zero.
    pub fn sign(&self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let (sa, sb) = (
            self.a.cmp(&BigRational::zero()),
            self.b.cmp(&BigRational::zero()),
        );
        match (sa, sb) {
            (Equal, s) | (s, Equal) => s,
            (Greater, Greater) => Greater,
            (Less, Less) => Less,
            // Opposite signs: compare a^2 with 3 b^2 on the positive side.
            (Greater, Less) => {
                let lhs = &self.a * &self.a;
                let rhs = BigRational::from_integer(3.into()) * &self.b * &self.b;
                lhs.cmp(&rhs)
            }
            (Less, Greater) => {
                let lhs = BigRational::from_integer(3.into()) * &self.b * &self.b;
                let rhs = &self.a * &self.a;
                lhs.cmp(&rhs)
            }
        }
    }

    /// Certified f64 enclosure.
    fn to_interval(&self) -> Iv {
        Iv::from_rational(&self.a).add(Iv::from_rational(&self.b).mul(Iv::SQRT3))
    }
}

/// A planar point with exact Q(sqrt 3) coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: QSqrt3,
    pub y: QSqrt3,
}

impl PlanePoint {
    pub fn new(x: QSqrt3, y: QSqrt3) -> Self {
        PlanePoint { x, y }
    }

    /// Exact squared Euclidean distance.
    pub fn dist2(&self, o: &PlanePoint) -> QSqrt3 {
        let dx = self.x.sub(&o.x);
        let dy = self.y.sub(&o.y);
        dx.mul(&dx).add(&dy.mul(&dy))
    }
}

/// Exact cross product of `b - a` and `c - a`; zero iff collinear.
fn cross(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> QSqrt3 {
    let ux = b.x.sub(&a.x);
    let uy = b.y.sub(&a.y);
    let vx = c.x.sub(&a.x);
    let vy = c.y.sub(&a.y);
    ux.mul(&vy).sub(&uy.mul(&vx))
}

/// A triangle shape given by its sorted angles in degrees, exact rationals
/// summing to 180.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleShape {
    angles: [BigRational; 3],
}

impl TriangleShape {
    pub fn new(angles: [BigRational; 3]) -> Result<Self> {
        let mut a = angles;
        a.sort();
        let total: BigRational = a.iter().sum();
        if total != BigRational::from_integer(180.into()) {
            return Err(Error::invalid("triangle angles must sum to 180 degrees"));
        }
        if a[0] <= BigRational::zero() || a[2] >= BigRational::from_integer(180.into()) {
            return Err(Error::invalid(
                "triangle angles must lie strictly in (0, 180)",
            ));
        }
        Ok(TriangleShape { angles: a })
    }

    pub fn from_integers(a: i64, b: i64, c: i64) -> Result<Self> {
        TriangleShape::new([
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            BigRational::from_integer(c.into()),
        ])
    }

    pub fn equilateral() -> Self {
        TriangleShape::from_integers(60, 60, 60).expect("valid")
    }

    pub fn is_equilateral(&self) -> bool {
        let sixty = BigRational::from_integer(60.into());
        self.angles.iter().all(|a| *a == sixty)
    }

    pub fn angles(&self) -> &[BigRational; 3] {
        &self.angles
    }
}

/// The similarity hypergraph: a triple of points is an edge when it forms a
/// non-degenerate triangle whose sorted angles differ from the shape's by at
/// most `eps_degrees` componentwise. Exact arithmetic decides the
/// equilateral eps = 0 case; everything else uses certified intervals.
pub fn similarity_hypergraph(
    points: &[PlanePoint],
    shape: &TriangleShape,
    eps_degrees: f64,
) -> Result<Hypergraph3> {
    let n = points.len();
    {
        let mut seen = std::collections::HashSet::new();
        for p in points {
            if !seen.insert(p.clone()) {
                return Err(Error::invalid("duplicate points in input"));
            }
        }
    }
    let mut h = Hypergraph3::new(n);
    if eps_degrees == 0.0 && shape.is_equilateral() {
        // Equal squared side lengths characterize the equilateral triangle,
        // and equality in Q(sqrt 3) is exact.
        let mut d2: HashMap<(u32, u32), QSqrt3> = HashMap::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                d2.insert((i, j), points[i as usize].dist2(&points[j as usize]));
            }
        }
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                let dij = &d2[&(i, j)];
                for k in j + 1..n as u32 {
                    if d2[&(j, k)] == *dij && d2[&(i, k)] == *dij {
                        h.insert([i, j, k])?;
                    }
                }
            }
        }
        return Ok(h);
    }

    let shape_iv: [Iv; 3] = [
        Iv::from_rational(&shape.angles[0]),
        Iv::from_rational(&shape.angles[1]),
        Iv::from_rational(&shape.angles[2]),
    ];
    let eps = Iv::point(eps_degrees);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            for k in j + 1..n as u32 {
                let (a, b, c) = (
                    &points[i as usize],
                    &points[j as usize],
                    &points[k as usize],
                );
                if cross(a, b, c).is_zero() {
                    continue;
                }
                let angles = sorted_angle_intervals(a, b, c)?;
                let mut all_inside = true;
                let mut any_outside = false;
                for t in 0..3 {
                    let diff = angles[t].sub(shape_iv[t]);
                    if diff.hi <= eps.lo && -diff.lo <= eps.lo {
                        // certainly within
                    } else if diff.lo > eps.hi || -diff.hi > eps.hi {
                        any_outside = true;
                        break;
                    } else {
                        all_inside = false;
                    }
                }
                if any_outside {
                    continue;
                }
                if all_inside {
                    h.insert([i, j, k])?;
                } else {
                    return Err(Error::Indeterminate(format!(
                        "angle comparison for points {i},{j},{k} straddles the eps boundary"
                    )));
                }
            }
        }
    }
    Ok(h)
}

/// Sorted enclosures of the three angles (degrees) of a non-degenerate
/// triangle.
fn sorted_angle_intervals(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> Result<[Iv; 3]> {
    let angle = |p: &PlanePoint, q: &PlanePoint, r: &PlanePoint| -> Result<Iv> {
        // Angle at p between q and r.
        let ux = q.x.sub(&p.x).to_interval();
        let uy = q.y.sub(&p.y).to_interval();
        let vx = r.x.sub(&p.x).to_interval();
        let vy = r.y.sub(&p.y).to_interval();
        let dot = ux.mul(vx).add(uy.mul(vy));
        let n1 = ux.mul(ux).add(uy.mul(uy));
        let n2 = vx.mul(vx).add(vy.mul(vy));
        let denom = n1.mul(n2).sqrt()?;
        let cos = dot.div_pos(denom)?.clamp_unit();
        Ok(cos.acos().mul(Iv::DEG_PER_RAD))
    };
    let a1 = angle(a, b, c)?;
    let a2 = angle(b, a, c)?;
    let a3 = angle(c, a, b)?;
    let los = {
        let mut v = [a1.lo, a2.lo, a3.lo];
        v.sort_by(f64::total_cmp);
        v
    };
    let his = {
        let mut v = [a1.hi, a2.hi, a3.hi];
        v.sort_by(f64::total_cmp);
        v
    };
    Ok([
        Iv {
            lo: los[0],
            hi: his[0],
        },
        Iv {
            lo: los[1],
            hi: his[1],
        },
        Iv {
            lo: los[2],
            hi: his[2],
        },
    ])
}

/// Closed f64 interval with outward rounding after every operation.
#[derive(Clone, Copy, Debug)]
struct Iv {
    lo: f64,
    hi: f64,
}

impl Iv {
    const SQRT3: Iv = Iv {
        lo: 1.732_050_807_568_877,
        hi: 1.732_050_807_568_878,
    };
    const DEG_PER_RAD: Iv = Iv {
        lo: 57.295_779_513_082_31,
        hi: 57.295_779_513_082_33,
    };

    fn point(x: f64) -> Iv {
        Iv { lo: x, hi: x }
    }

    /// Conservative enclosure of an exact rational: nearest f64 widened by
    /// several ulps, covering the conversion error.
    fn from_rational(r: &BigRational) -> Iv {
        match r.to_f64() {
            Some(f) if f.is_finite() => Iv {
                lo: f.next_down().next_down().next_down(),
                hi: f.next_up().next_up().next_up(),
            },
            _ => Iv {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    fn widen(self) -> Iv {
        Iv {
            lo: self.lo.next_down(),
            hi: self.hi.next_up(),
        }
    }

    fn add(self, o: Iv) -> Iv {
        Iv {
            lo: self.lo + o.lo,
            hi: self.hi + o.hi,
        }
        .widen()
    }

    fn sub(self, o: Iv) -> Iv {
        Iv {
            lo: self.lo - o.hi,
            hi: self.hi - o.lo,
        }
        .widen()
    }

    fn mul(self, o: Iv) -> Iv {
        let cands = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        Iv {
            lo: cands.iter().copied().fold(f64::INFINITY, f64::min),
            hi: cands.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
        .widen()
    }

    fn sqrt(self) -> Result<Iv> {
        if self.hi < 0.0 {
            return Err(Error::Indeterminate("sqrt of negative enclosure".into()));
        }
        Ok(Iv {
            lo: self.lo.max(0.0).sqrt(),
            hi: self.hi.sqrt(),
        }
        .widen())
    }

    fn div_pos(self, d: Iv) -> Result<Iv> {
        if d.lo <= 0.0 {
            return Err(Error::Indeterminate(
                "division by an enclosure touching zero".into(),
            ));
        }
        let cands = [
            self.lo / d.lo,
            self.lo / d.hi,
            self.hi / d.lo,
            self.hi / d.hi,
        ];
        Ok(Iv {
            lo: cands.iter().copied().fold(f64::INFINITY, f64::min),
            hi: cands.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
        .widen())
    }

    fn clamp_unit(self) -> Iv {
        Iv {
            lo: self.lo.max(-1.0),
            hi: self.hi.min(1.0),
        }
    }

    fn acos(self) -> Iv {
        Iv {
            lo: self.hi.acos(),
            hi: self.lo.acos(),
        }
        .widen()
    }
}

/// A triangular-lattice point `x*v1 + y*v2` with its 3-coloring
/// `(x + 2y) mod 3`, where `v1 = (1,0)` and `v2 = (1/2, sqrt3/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub coeffs: (i64, i64),
    pub color: u8,
    pub point: PlanePoint,
}

/// All lattice points with both coefficients in `[-radius, radius]`,
/// colored, in row-major coefficient order.
pub fn lattice_patch(radius: i64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            let color = ((x + 2 * y).rem_euclid(3)) as u8;
            let px = QSqrt3::new(
                BigRational::new(BigInt::from(2 * x + y), BigInt::from(2)),
                BigRational::zero(),
            );
            let py = QSqrt3::new(
                BigRational::zero(),
                BigRational::new(BigInt::from(y), BigInt::from(2)),
            );
            out.push(LatticePoint {
                coeffs: (x, y),
                color,
                point: PlanePoint::new(px, py),
            });
        }
    }
    out
}

/// Squared distance between lattice points in coefficient space:
/// the quadratic form `dx^2 + dx*dy + dy^2`.
pub fn lattice_dist2(p: (i64, i64), q: (i64, i64)) -> i64 {
    let dx = q.0 - p.0;
    let dy = q.1 - p.1;
    dx * dx + dx * dy + dy * dy
}

/// Checks that every equilateral triangle of unit side length with all
/// three corners in the patch is rainbow, i.e. sees all three colors. For
/// each unit-distance pair, the two possible apexes are found by exact
/// 60-degree lattice rotations.
pub fn rainbow_check(patch: &[LatticePoint]) -> bool {
    let by_coeff: HashMap<(i64, i64), u8> = patch.iter().map(|p| (p.coeffs, p.color)).collect();
    for (i, p) in patch.iter().enumerate() {
        for q in &patch[i + 1..] {
            if lattice_dist2(p.coeffs, q.coeffs) != 1 {
                continue;
            }
            let w = (q.coeffs.0 - p.coeffs.0, q.coeffs.1 - p.coeffs.1);
            let apexes = [
                (p.coeffs.0 - w.1, p.coeffs.1 + w.0 + w.1),
                (p.coeffs.0 + w.0 + w.1, p.coeffs.1 - w.0),
            ];
            for apex in apexes {
                if let Some(&apex_color) = by_coeff.get(&apex) {
                    let mut seen = [false; 3];
                    seen[p.color as usize] = true;
                    seen[q.color as usize] = true;
                    seen[apex_color as usize] = true;
                    if seen.iter().any(|&s| !s) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Vertex cap for the finite forbidden family the planar argument feeds
/// into Turán machinery: patterns of size up to `max_len` need at most
/// `max_len` vertices, and the default cap keeps a margin of three.
pub fn forbidden_family_vertex_cap(max_len: usize) -> usize {
    max_len + 3
}

/// Builds the exact equilateral similarity hypergraph of the points and
/// checks freeness of tight cycles minus one hyperedge up to `max_len`.
pub fn equilateral_cm_free_check(points: &[PlanePoint], max_len: usize) -> Result<bool> {
    let h = similarity_hypergraph(points, &TriangleShape::equilateral(), 0.0)?;
    Ok(is_fcm_free(&h, max_len).0)
}

fn rational_to_text(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_from_text(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

/// Text form: one `p ax bx ay by` line per point, encoding
/// `x = ax + bx*sqrt3`, `y = ay + by*sqrt3` with rationals as `num/den`.
pub fn points_to_text(points: &[PlanePoint]) -> String {
    let mut out = String::new();
    for p in points {
        out.push_str(&format!(
            "p {} {} {} {}\n",
            rational_to_text(&p.x.a),
            rational_to_text(&p.x.b),
            rational_to_text(&p.y.a),
            rational_to_text(&p.y.b),
        ));
    }
    out
}

/// Parses the text form of a point set.
pub fn points_from_text(text: &str) -> Result<Vec<PlanePoint>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        if it.next() != Some("p") {
            return Err(Error::Parse(format!("expected point line, got '{line}'")));
        }
        let mut parts = Vec::with_capacity(4);
        for _ in 0..4 {
            let tok = it
                .next()
                .ok_or_else(|| Error::Parse(format!("point line too short: '{line}'")))?;
            parts.push(rational_from_text(tok)?);
        }
        if it.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens on '{line}'")));
        }
        let [ax, bx, ay, by]: [BigRational; 4] = parts.try_into().unwrap();
        out.push(PlanePoint::new(QSqrt3::new(ax, bx), QSqrt3::new(ay, by)));
    }
    Ok(out)
}
