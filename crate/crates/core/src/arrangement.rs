//! Arrangements of rational planes in P3: parsing, the incidence lattice of
//! lines and points, and the admissibility conditions the resolution needs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use crate::rat::Rat;

pub const VARS: [char; 4] = ['x', 'y', 'z', 't'];

/// A linear form a0*x + a1*y + a2*z + a3*t, stored in its normalized
/// representative: integral coefficients, content 1, first nonzero positive.
/// Two forms are proportional iff their normalized representatives are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm {
    coeffs: [Rat; 4],
}

impl LinearForm {
    pub fn new(coeffs: [Rat; 4]) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(LinearForm {
            coeffs: normalize_integral(coeffs),
        })
    }

    pub fn from_ints(coeffs: [i64; 4]) -> Self {
        LinearForm::new(coeffs.map(Rat::from_int)).expect("nonzero form")
    }

    pub fn coeffs(&self) -> &[Rat; 4] {
        &self.coeffs
    }

    pub fn eval(&self, v: &[Rat; 4]) -> Rat {
        let mut acc = Rat::zero();
        for (c, x) in self.coeffs.iter().zip(v) {
            acc += c * x;
        }
        acc
    }

    /// Coefficients reduced mod p. Content 1 guarantees a nonzero result.
    pub fn mod_p(&self, p: u64) -> [u64; 4] {
        let out = self.coeffs.clone().map(|c| {
            c.mod_p(p)
                .expect("normalized form coefficients are integers")
        });
        debug_assert!(out.iter().any(|&c| c != 0));
        out
    }
}

fn normalize_integral(coeffs: [Rat; 4]) -> [Rat; 4] {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let scaled: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for v in &scaled {
        content = content.gcd(v);
    }
    let first = scaled.iter().find(|v| !v.is_zero()).expect("nonzero form");
    if first.is_negative() {
        content = -content;
    }
    let reduced: Vec<Rat> = scaled.iter().map(|v| Rat::from_int(v / &content)).collect();
    [
        reduced[0].clone(),
        reduced[1].clone(),
        reduced[2].clone(),
        reduced[3].clone(),
    ]
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, var) in self.coeffs.iter().zip(VARS) {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if !abs.is_one() {
                write!(f, "{}", abs)?;
            }
            write!(f, "{}", var)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A point of P3 with rational homogeneous coordinates, normalized so the
/// first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    coords: [Rat; 4],
}

impl ProjPoint {
    pub fn new(coords: [Rat; 4]) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(ProjPoint {
            coords: normalize_projective(coords),
        })
    }

    pub fn from_ints(coords: [i64; 4]) -> Self {
        ProjPoint::new(coords.map(Rat::from_int)).expect("nonzero point")
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.coords
    }
}

pub(crate) fn normalize_projective<F: Field>(mut coords: [F; 4]) -> [F; 4] {
    let lead = coords
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero coordinate vector");
    let inv = coords[lead].inv();
    for c in coords.iter_mut() {
        *c = c.mul(&inv);
    }
    coords
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{}:{})",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

/// A line in P3, canonically represented both by a spanning pair of points
/// (reduced basis of its 2-dimensional cone) and by the pair of linear forms
/// cutting it out. Either representative is independent of how the line was
/// produced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjLine {
    span: [ProjPoint; 2],
    cut_out_by: [LinearForm; 2],
    planes: Vec<usize>,
}

impl ProjLine {
    fn from_span_rows(rows: [Vec<Rat>; 2], planes: Vec<usize>) -> Self {
        let m = Matrix::from_rows(rows.to_vec(), 4);
        let (red, rank) = m.rref();
        assert_eq!(rank, 2, "spanning points must be distinct");
        let span = [
            ProjPoint::new(row_to_array(red.row(0))).unwrap(),
            ProjPoint::new(row_to_array(red.row(1))).unwrap(),
        ];
        // dual description: kernel of the span matrix, reduced the same way
        let dual = red.kernel_basis(&Rat::one());
        let dm = Matrix::from_rows(dual, 4);
        let (dred, drank) = dm.rref();
        assert_eq!(drank, 2);
        let cut_out_by = [
            LinearForm::new(row_to_array(dred.row(0))).unwrap(),
            LinearForm::new(row_to_array(dred.row(1))).unwrap(),
        ];
        ProjLine {
            span,
            cut_out_by,
            planes,
        }
    }

    pub fn span(&self) -> &[ProjPoint; 2] {
        &self.span
    }

    /// The canonical pair of linear forms generating the line's ideal.
    pub fn cut_out_by(&self) -> &[LinearForm; 2] {
        &self.cut_out_by
    }

    /// Indices of the arrangement planes containing this line.
    pub fn planes(&self) -> &[usize] {
        &self.planes
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.cut_out_by.iter().all(|f| f.eval(p.coords()).is_zero())
    }
}

fn row_to_array(row: &[Rat]) -> [Rat; 4] {
    [
        row[0].clone(),
        row[1].clone(),
        row[2].clone(),
        row[3].clone(),
    ]
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}=0", self.cut_out_by[0], self.cut_out_by[1])
    }
}

/// Intersection line of two non-proportional planes.
pub fn intersect_planes(f: &LinearForm, g: &LinearForm) -> Result<ProjLine> {
    if f == g {
        return Err(Error::ProportionalForms);
    }
    let m = Matrix::from_rows(vec![f.coeffs().to_vec(), g.coeffs().to_vec()], 4);
    let ker = m.kernel_basis(&Rat::one());
    assert_eq!(ker.len(), 2);
    Ok(ProjLine::from_span_rows(
        [ker[0].clone(), ker[1].clone()],
        Vec::new(),
    ))
}

/// An arrangement of planes with an optional squarefree integer multiplier
/// of the product equation.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub name: String,
    forms: Vec<LinearForm>,
    scale: i64,
}

impl Arrangement {
    /// Build from normalized forms. The full invariant/counting pipeline
    /// needs exactly eight planes; incidence classification works for any
    /// number, which the admissibility tests use.
    pub fn with_forms(name: &str, forms: Vec<LinearForm>, scale: i64) -> Result<Self> {
        check_squarefree(scale)?;
        for i in 0..forms.len() {
            for j in (i + 1)..forms.len() {
                if forms[i] == forms[j] {
                    return Err(Error::DuplicatePlane(i, j));
                }
            }
        }
        Ok(Arrangement {
            name: name.to_string(),
            forms,
            scale,
        })
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn with_scale(&self, scale: i64) -> Result<Self> {
        check_squarefree(scale)?;
        let mut out = self.clone();
        out.scale = scale;
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.forms.len()
    }

    /// The arrangement with every form pushed through x -> T x. The factors
    /// lost when the substituted forms are renormalized rescale the product
    /// equation, so their square class folds into the scale; counts over
    /// F_p are then genuinely invariant.
    pub fn transformed(&self, t: &[[Rat; 4]; 4]) -> Result<Self> {
        let mut factor = Rat::from_int(self.scale);
        let mut forms = Vec::with_capacity(self.forms.len());
        for f in &self.forms {
            let mut raw = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
            for (j, o) in raw.iter_mut().enumerate() {
                for (c, row) in f.coeffs().iter().zip(t) {
                    *o += c * &row[j];
                }
            }
            let normalized = LinearForm::new(raw.clone())?;
            let lead = raw.iter().position(|c| !c.is_zero()).unwrap();
            factor *= &raw[lead] * &normalized.coeffs()[lead].inv();
            forms.push(normalized);
        }
        Arrangement::with_forms(&self.name, forms, squarefree_part(&factor)?)
    }

    pub fn classify(&self) -> IncidenceData {
        let forms: Vec<[Rat; 4]> = self.forms.iter().map(|f| f.coeffs().clone()).collect();
        let raw = classify_generic(&forms).expect("rational forms are pairwise distinct");
        IncidenceData::from_raw(raw)
    }

    /// Incidence counters of the reduction mod p, or None when the planes
    /// degenerate (some pair becomes proportional mod p).
    pub fn counters_mod_p(&self, p: u64) -> Option<(Counters, bool)> {
        use crate::fp::FpElem;
        let forms: Vec<[FpElem; 4]> = self
            .forms
            .iter()
            .map(|f| f.mod_p(p).map(|c| FpElem::from_residue(c, p)))
            .collect();
        let raw = classify_generic(&forms)?;
        let admissible = raw.admissible();
        Some((raw.counters(), admissible))
    }
}

/// The squarefree integer representing the square class of a nonzero
/// rational: strip even prime powers from numerator times denominator.
fn squarefree_part(q: &Rat) -> Result<i64> {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};

    assert!(!q.is_zero());
    let mut n = (q.numer() * q.denom()).abs();
    let negative = q.is_negative();
    let mut result = BigInt::one();
    let mut d = BigInt::from(2);
    let cap = BigInt::from(1u64 << 20);
    while &d * &d <= n && d <= cap {
        let mut count = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            count += 1;
        }
        if count % 2 == 1 {
            result *= &d;
        }
        d += 1;
    }
    // leftover cofactor: either a prime, a perfect square of one, or (for
    // adversarial inputs beyond the trial bound) treated as squarefree
    let root = n.sqrt();
    if &root * &root == n {
        // even power, drop
    } else {
        result *= n;
    }
    let mut out: i64 = result
        .try_into()
        .map_err(|_| Error::Document("transformed scale exceeds i64".into()))?;
    if negative {
        out = -out;
    }
    Ok(out)
}

fn check_squarefree(scale: i64) -> Result<()> {
    if scale == 0 {
        return Err(Error::BadScale(scale));
    }
    let mut n = scale.unsigned_abs();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return Err(Error::BadScale(scale));
        }
        while n.is_multiple_of(d) {
            n /= d;
        }
        d += 1;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// incidence classification, generic over the coefficient field
// ---------------------------------------------------------------------------

pub(crate) struct RawLine<F> {
    pub span: [Vec<F>; 2],
    pub planes: Vec<usize>,
}

pub(crate) struct RawPoint<F> {
    pub coords: Vec<F>,
    pub planes: Vec<usize>,
    pub triple_lines_through: usize,
}

pub(crate) struct RawIncidence<F> {
    pub lines: Vec<RawLine<F>>,
    pub points: Vec<RawPoint<F>>,
}

impl<F> RawIncidence<F> {
    pub fn admissible(&self) -> bool {
        self.lines.iter().all(|l| l.planes.len() <= 3)
            && self.points.iter().all(|p| p.planes.len() <= 5)
    }

    pub fn counters(&self) -> Counters {
        let mut c = Counters::default();
        for l in &self.lines {
            if l.planes.len() == 3 {
                c.l3 += 1;
            }
        }
        for p in &self.points {
            match (p.planes.len(), p.triple_lines_through) {
                (3, _) => c.p3 += 1,
                (4, 0) => c.p40 += 1,
                (4, 1) => c.p41 += 1,
                (5, 0) => c.p50 += 1,
                (5, 1) => c.p51 += 1,
                (5, 2) => c.p52 += 1,
                _ => {} // inadmissible loci are reported by validate()
            }
        }
        c
    }
}

fn eval_form<F: Field>(form: &[F], v: &[F]) -> F {
    let mut acc = form[0].mul(&v[0]);
    for i in 1..4 {
        acc = acc.add(&form[i].mul(&v[i]));
    }
    acc
}

/// Enumerate the full incidence lattice: every pairwise intersection line
/// with the set of planes containing it, and every point cut out by a
/// rank-3 triple of planes, tagged with its full multiplicity and the number
/// of triple lines through it.
///
/// Returns None when two forms become proportional (only possible after
/// reduction mod p; rational arrangements reject duplicates at parse time).
pub(crate) fn classify_generic<F>(forms: &[[F; 4]]) -> Option<RawIncidence<F>>
where
    F: Field + Hash + Eq,
{
    let r = forms.len();
    let sample = forms[0][0].clone();

    // lines from pairs
    let mut lines_by_key: HashMap<Vec<F>, RawLine<F>> = HashMap::new();
    for i in 0..r {
        for j in (i + 1)..r {
            let m = Matrix::from_rows(vec![forms[i].to_vec(), forms[j].to_vec()], 4);
            let ker = m.kernel_basis(&sample);
            if ker.len() != 2 {
                return None; // proportional pair
            }
            let span = Matrix::from_rows(ker, 4);
            let (red, rank) = span.rref();
            debug_assert_eq!(rank, 2);
            let key: Vec<F> = red.row(0).iter().chain(red.row(1)).cloned().collect();
            let entry = lines_by_key.entry(key.clone()).or_insert_with(|| {
                let planes = (0..r)
                    .filter(|&k| {
                        eval_form(&forms[k], red.row(0)).is_zero()
                            && eval_form(&forms[k], red.row(1)).is_zero()
                    })
                    .collect();
                RawLine {
                    span: [red.row(0).to_vec(), red.row(1).to_vec()],
                    planes,
                }
            });
            debug_assert!(entry.planes.contains(&i) && entry.planes.contains(&j));
        }
    }
    let mut lines: Vec<RawLine<F>> = lines_by_key.into_values().collect();
    lines.sort_by(|a, b| a.planes.cmp(&b.planes));

    // points from rank-3 triples
    let mut points_by_key: HashMap<Vec<F>, RawPoint<F>> = HashMap::new();
    for i in 0..r {
        for j in (i + 1)..r {
            for k in (j + 1)..r {
                let m = Matrix::from_rows(
                    vec![forms[i].to_vec(), forms[j].to_vec(), forms[k].to_vec()],
                    4,
                );
                let ker = m.kernel_basis(&sample);
                if ker.len() != 1 {
                    continue; // the triple shares a line (or worse)
                }
                let coords = normalize_projective([
                    ker[0][0].clone(),
                    ker[0][1].clone(),
                    ker[0][2].clone(),
                    ker[0][3].clone(),
                ])
                .to_vec();
                points_by_key.entry(coords.clone()).or_insert_with(|| {
                    let planes: Vec<usize> = (0..r)
                        .filter(|&m| eval_form(&forms[m], &coords).is_zero())
                        .collect();
                    RawPoint {
                        coords,
                        planes,
                        triple_lines_through: 0,
                    }
                });
            }
        }
    }
    let mut points: Vec<RawPoint<F>> = points_by_key.into_values().collect();

    // a point lies on a triple line iff the line's three planes all pass
    // through it
    for p in points.iter_mut() {
        let set: BTreeSet<usize> = p.planes.iter().copied().collect();
        p.triple_lines_through = lines
            .iter()
            .filter(|l| l.planes.len() == 3 && l.planes.iter().all(|q| set.contains(q)))
            .count();
    }
    points.sort_by(|a, b| a.planes.cmp(&b.planes));

    Some(RawIncidence { lines, points })
}

// ---------------------------------------------------------------------------
// classified singular loci over Q
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Default, Debug, Serialize, Deserialize)]
pub struct Counters {
    pub p3: u32,
    pub p40: u32,
    pub p41: u32,
    pub p50: u32,
    pub p51: u32,
    pub p52: u32,
    pub l3: u32,
}

impl Counters {
    pub fn as_tuple(&self) -> (u32, u32, u32, u32, u32, u32, u32) {
        (
            self.p3, self.p40, self.p41, self.p50, self.p51, self.p52, self.l3,
        )
    }
}

impl fmt::Display for Counters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p3={} p4^0={} p4^1={} p5^0={} p5^1={} p5^2={} l3={}",
            self.p3, self.p40, self.p41, self.p50, self.p51, self.p52, self.l3
        )
    }
}

/// A singular point of the arrangement: `q` planes pass through it and it
/// lies on `triple_lines_through` triple lines.
#[derive(Clone, Debug)]
pub struct ClassifiedPoint {
    pub point: ProjPoint,
    pub q: usize,
    pub triple_lines_through: usize,
    pub planes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct IncidenceData {
    pub double_lines: Vec<ProjLine>,
    pub triple_lines: Vec<ProjLine>,
    /// lines contained in four or more planes (inadmissible)
    pub overloaded_lines: Vec<ProjLine>,
    /// every point on at least three planes, tagged with multiplicity
    pub points: Vec<ClassifiedPoint>,
    pub counters: Counters,
}

impl IncidenceData {
    fn from_raw(raw: RawIncidence<Rat>) -> Self {
        let counters = raw.counters();
        let mut double_lines = Vec::new();
        let mut triple_lines = Vec::new();
        let mut overloaded_lines = Vec::new();
        for l in raw.lines {
            let line = ProjLine::from_span_rows([l.span[0].clone(), l.span[1].clone()], l.planes);
            match line.planes().len() {
                2 => double_lines.push(line),
                3 => triple_lines.push(line),
                _ => overloaded_lines.push(line),
            }
        }
        let points = raw
            .points
            .into_iter()
            .map(|p| ClassifiedPoint {
                point: ProjPoint::new([
                    p.coords[0].clone(),
                    p.coords[1].clone(),
                    p.coords[2].clone(),
                    p.coords[3].clone(),
                ])
                .unwrap(),
                q: p.planes.len(),
                triple_lines_through: p.triple_lines_through,
                planes: p.planes,
            })
            .collect();
        IncidenceData {
            double_lines,
            triple_lines,
            overloaded_lines,
            points,
            counters,
        }
    }

    pub fn points_of_multiplicity(&self, q: usize) -> impl Iterator<Item = &ClassifiedPoint> {
        self.points.iter().filter(move |p| p.q == q)
    }
}

/// Verdict of the resolution hypotheses: no line on four or more planes, no
/// point on six or more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    LineOnTooManyPlanes { line: String, planes: usize },
    PointOnTooManyPlanes { point: String, planes: usize },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Admissibility::Admissible => write!(f, "admissible"),
            Admissibility::LineOnTooManyPlanes { line, planes } => {
                write!(f, "line {line} lies on {planes} planes")
            }
            Admissibility::PointOnTooManyPlanes { point, planes } => {
                write!(f, "point {point} lies on {planes} planes")
            }
        }
    }
}

pub fn validate(d: &IncidenceData) -> Admissibility {
    if let Some(line) = d.overloaded_lines.first() {
        return Admissibility::LineOnTooManyPlanes {
            line: line.to_string(),
            planes: line.planes().len(),
        };
    }
    if let Some(p) = d.points.iter().find(|p| p.q >= 6) {
        return Admissibility::PointOnTooManyPlanes {
            point: p.point.to_string(),
            planes: p.q,
        };
    }
    Admissibility::Admissible
}

// ---------------------------------------------------------------------------
// arrangement documents
// ---------------------------------------------------------------------------

/// On-disk description of an arrangement. Plane coefficients are expressions
/// over integers and single-letter parameters ("-3/2", "A*B", "-D/(1-D)");
/// parameters are bound by the `params` map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementDocument {
    pub name: String,
    pub planes: Vec<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl ArrangementDocument {
    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let mut params: BTreeMap<char, Rat> = BTreeMap::new();
        for (k, v) in &self.params {
            let mut chars = k.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Document(format!(
                    "parameter name `{k}` must be a single letter"
                )));
            };
            params.insert(c, v.parse()?);
        }
        if self.planes.len() != 8 {
            return Err(Error::WrongTotalDegree(self.planes.len()));
        }
        let mut forms = Vec::with_capacity(self.planes.len());
        for plane in &self.planes {
            let mut coeffs = Vec::with_capacity(4);
            for c in plane {
                coeffs.push(expr::eval(c, &params)?);
            }
            forms.push(LinearForm::new([
                coeffs[0].clone(),
                coeffs[1].clone(),
                coeffs[2].clone(),
                coeffs[3].clone(),
            ])?);
        }
        Arrangement::with_forms(&self.name, forms, self.scale.unwrap_or(1))
    }
}

/// Parse an arrangement document from JSON text.
pub fn parse(input: &str) -> Result<Arrangement> {
    let doc: ArrangementDocument = serde_json::from_str(input)?;
    doc.to_arrangement()
}

pub mod expr {
    //! Tiny recursive-descent evaluator for coefficient expressions:
    //! integers, single-letter parameters, + - * / ^ and parentheses.

    use std::collections::BTreeMap;

    use crate::error::{Error, Result};
    use crate::rat::Rat;

    struct Parser<'a> {
        src: &'a str,
        bytes: &'a [u8],
        pos: usize,
        params: &'a BTreeMap<char, Rat>,
    }

    pub fn eval(src: &str, params: &BTreeMap<char, Rat>) -> Result<Rat> {
        let mut p = Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            params,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(Error::BadExpression(src.to_string()));
        }
        Ok(v)
    }

    impl<'a> Parser<'a> {
        fn skip_ws(&mut self) {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.bytes.get(self.pos).copied()
        }

        fn bump(&mut self) -> Option<u8> {
            let c = self.peek()?;
            self.pos += 1;
            Some(c)
        }

        fn expr(&mut self) -> Result<Rat> {
            let mut acc = self.term()?;
            while let Some(op @ (b'+' | b'-')) = self.peek() {
                self.pos += 1;
                let rhs = self.term()?;
                acc = if op == b'+' { acc + rhs } else { acc - rhs };
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Rat> {
            let mut acc = self.unary()?;
            while let Some(op @ (b'*' | b'/')) = self.peek() {
                self.pos += 1;
                let rhs = self.unary()?;
                if op == b'*' {
                    acc *= rhs;
                } else {
                    if rhs.is_zero() {
                        return Err(Error::BadExpression(format!(
                            "division by zero in `{}`",
                            self.src
                        )));
                    }
                    acc = acc / rhs;
                }
            }
            Ok(acc)
        }

        fn unary(&mut self) -> Result<Rat> {
            if self.peek() == Some(b'-') {
                self.pos += 1;
                return Ok(-self.unary()?);
            }
            let base = self.atom()?;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let e = self.integer()?;
                let e: u32 = e
                    .try_into()
                    .map_err(|_| Error::BadExpression(self.src.to_string()))?;
                return Ok(base.pow(e));
            }
            Ok(base)
        }

        fn atom(&mut self) -> Result<Rat> {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let v = self.expr()?;
                    if self.bump() != Some(b')') {
                        return Err(Error::BadExpression(self.src.to_string()));
                    }
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() => Ok(Rat::from_int(self.integer()?)),
                Some(c) if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    let letter = c as char;
                    self.params
                        .get(&letter)
                        .cloned()
                        .ok_or_else(|| Error::UnboundParameter(letter.to_string()))
                }
                _ => Err(Error::BadExpression(self.src.to_string())),
            }
        }

        fn integer(&mut self) -> Result<i64> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(Error::BadExpression(self.src.to_string()));
            }
            self.src[start..self.pos]
                .parse()
                .map_err(|_| Error::BadExpression(self.src.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn form(c: [i64; 4]) -> LinearForm {
        LinearForm::from_ints(c)
    }

    fn point_set(points: &[[i64; 4]]) -> std::collections::BTreeSet<String> {
        points
            .iter()
            .map(|&c| ProjPoint::from_ints(c).to_string())
            .collect()
    }

    #[test]
    fn forms_normalize_to_a_unique_representative() {
        let a = LinearForm::new([Rat::new(1, 2), Rat::new(-3, 4), Rat::zero(), Rat::zero()])
            .unwrap();
        let b = form([-2, 3, 0, 0]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "2x-3y");
        assert!(LinearForm::new([Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()]).is_err());
    }

    #[test]
    fn plane_intersections() {
        let l = intersect_planes(&form([1, 0, 0, 0]), &form([0, 1, 0, 0])).unwrap();
        assert!(l.contains(&ProjPoint::from_ints([0, 0, 1, 0])));
        assert!(l.contains(&ProjPoint::from_ints([0, 0, 0, 1])));
        let l2 = intersect_planes(&form([1, 0, 0, 0]), &form([1, 1, 0, 0])).unwrap();
        assert_eq!(l, l2); // {x=0} meets {x+y=0} in the line x=y=0
        assert!(intersect_planes(&form([1, 0, 0, 0]), &form([2, 0, 0, 0])).is_err());
    }

    #[test]
    fn line_of_arrangement_43_prints_canonically() {
        // {y=0} and {x+y+z-t=0} meet in the triple line x+z-t = y = 0
        let l = intersect_planes(&form([0, 1, 0, 0]), &form([1, 1, 1, -1])).unwrap();
        assert_eq!(l.to_string(), "x+z-t=y=0");
        let arr = catalog::get("43").unwrap();
        let inc = arr.classify();
        assert_eq!(inc.triple_lines.len(), 1);
        assert_eq!(inc.triple_lines[0].cut_out_by(), l.cut_out_by());
    }

    #[test]
    fn arrangement_two_classification() {
        let arr = catalog::get("2").unwrap();
        let inc = arr.classify();
        assert_eq!(inc.counters.as_tuple(), (4, 1, 4, 0, 0, 4, 4));
        let p52: std::collections::BTreeSet<String> = inc
            .points
            .iter()
            .filter(|p| p.q == 5)
            .map(|p| p.point.to_string())
            .collect();
        assert_eq!(
            p52,
            point_set(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        );
        let p40: Vec<&ClassifiedPoint> = inc
            .points
            .iter()
            .filter(|p| p.q == 4 && p.triple_lines_through == 0)
            .collect();
        assert_eq!(p40.len(), 1);
        assert_eq!(p40[0].point, ProjPoint::from_ints([1, -1, 1, -1]));
        // triple lines are the four edges x=y, y=z, z=t, t=x cut with the
        // coordinate planes
        let expected_lines: std::collections::BTreeSet<String> = [
            intersect_planes(&form([1, 0, 0, 0]), &form([0, 1, 0, 0])).unwrap(),
            intersect_planes(&form([0, 1, 0, 0]), &form([0, 0, 1, 0])).unwrap(),
            intersect_planes(&form([0, 0, 1, 0]), &form([0, 0, 0, 1])).unwrap(),
            intersect_planes(&form([0, 0, 0, 1]), &form([1, 0, 0, 0])).unwrap(),
        ]
        .iter()
        .map(|l| l.to_string())
        .collect();
        let got: std::collections::BTreeSet<String> =
            inc.triple_lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(got, expected_lines);
    }

    #[test]
    fn arrangement_85_point_list() {
        let arr = catalog::get("85").unwrap();
        let inc = arr.classify();
        assert_eq!(inc.counters.as_tuple(), (8, 12, 0, 0, 0, 0, 0));
        let p40: std::collections::BTreeSet<String> = inc
            .points
            .iter()
            .filter(|p| p.q == 4)
            .map(|p| p.point.to_string())
            .collect();
        assert_eq!(
            p40,
            point_set(&[
                [1, 1, -1, -1],
                [1, -1, 1, -1],
                [1, -1, -1, 1],
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 1, 0],
                [0, 1, -1, 0],
                [1, 0, -1, 0],
                [1, -1, 0, 0],
                [1, 1, -1, 1],
                [1, -1, 1, 1],
                [-1, 1, 1, 1],
            ])
        );
    }

    #[test]
    fn generic_planes_have_only_triple_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let forms: Vec<LinearForm> = (0..8)
                .map(|_| LinearForm::from_ints(std::array::from_fn(|_| rng.gen_range(-9..=9))))
                .collect();
            let Ok(arr) = Arrangement::with_forms("generic", forms, 1) else {
                continue; // collision: redraw
            };
            let c = arr.classify().counters;
            if c.as_tuple() == (56, 0, 0, 0, 0, 0, 0) {
                return;
            }
        }
        panic!("no generic draw in 20 attempts");
    }

    #[test]
    fn pencil_of_four_planes_is_rejected() {
        // x, y, x+y, x-y all contain the line x=y=0
        let arr = Arrangement::with_forms(
            "pencil",
            vec![
                form([1, 0, 0, 0]),
                form([0, 1, 0, 0]),
                form([1, 1, 0, 0]),
                form([1, -1, 0, 0]),
            ],
            1,
        )
        .unwrap();
        let verdict = validate(&arr.classify());
        match verdict {
            Admissibility::LineOnTooManyPlanes { planes, ref line } => {
                assert_eq!(planes, 4);
                assert_eq!(line, "x=y=0");
            }
            other => panic!("expected a line violation, got {other:?}"),
        }
    }

    #[test]
    fn six_planes_through_a_point_are_rejected() {
        // six planes through (0:0:0:1) plus two generic ones
        let arr = Arrangement::with_forms(
            "bundle",
            vec![
                form([1, 0, 0, 0]),
                form([0, 1, 0, 0]),
                form([0, 0, 1, 0]),
                form([1, 1, 0, 0]),
                form([1, 0, 1, 0]),
                form([1, 2, 3, 0]),
                form([1, 1, 1, 1]),
                form([3, 1, 4, 1]),
            ],
            1,
        )
        .unwrap();
        let verdict = validate(&arr.classify());
        match verdict {
            Admissibility::PointOnTooManyPlanes { planes, ref point } => {
                assert_eq!(planes, 6);
                assert_eq!(point, "(0:0:0:1)");
            }
            other => panic!("expected a point violation, got {other:?}"),
        }
    }

    #[test]
    fn admissible_catalog_entries_validate() {
        for key in ["6", "2", "85"] {
            let arr = catalog::get(key).unwrap();
            assert!(validate(&arr.classify()).is_admissible());
        }
    }

    #[test]
    fn classification_ignores_order_and_scaling() {
        let arr = catalog::get("23").unwrap();
        let base = arr.classify().counters;
        let mut forms: Vec<LinearForm> = arr.forms().to_vec();
        forms.reverse();
        // rescaling is absorbed by normalization, so rebuild from scaled raws
        let scaled: Vec<LinearForm> = forms
            .iter()
            .map(|f| {
                let c = f.coeffs().clone().map(|v| v * Rat::new(-7, 3));
                LinearForm::new(c).unwrap()
            })
            .collect();
        let arr2 = Arrangement::with_forms("permuted", scaled, 1).unwrap();
        assert_eq!(arr2.classify().counters, base);
    }

    #[test]
    fn pair_count_identity() {
        // every unordered pair of planes is either a double line or one of
        // the three pairs inside a triple line
        for key in ["2", "23", "61", "85", "f42"] {
            let inc = catalog::get(key).unwrap().classify();
            assert_eq!(
                inc.double_lines.len() + 3 * inc.triple_lines.len(),
                28,
                "{key}"
            );
        }
    }

    #[test]
    fn five_fold_tags_match_definitions() {
        for key in ["2", "23", "43"] {
            let inc = catalog::get(key).unwrap().classify();
            for p in &inc.points {
                match p.q {
                    5 => assert!(p.triple_lines_through <= 2),
                    4 => assert!(p.triple_lines_through <= 1),
                    3 => assert_eq!(p.triple_lines_through, 0),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn document_parsing_errors() {
        let doc = r#"{"name":"short","planes":[["1","0","0","0"]]}"#;
        assert!(matches!(parse(doc), Err(Error::WrongTotalDegree(1))));

        let dup = r#"{"name":"dup","planes":[
            ["1","0","0","0"],["2","0","0","0"],["0","1","0","0"],["0","0","1","0"],
            ["0","0","0","1"],["1","1","0","0"],["1","0","1","0"],["1","1","1","1"]]}"#;
        assert!(matches!(parse(dup), Err(Error::DuplicatePlane(0, 1))));

        let bad = r#"{"name":"bad","planes":[
            ["1/0","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"],
            ["1","1","0","0"],["1","0","1","0"],["1","1","1","1"],["1","2","3","4"]]}"#;
        assert!(parse(bad).is_err());

        let unbound = r#"{"name":"unbound","planes":[
            ["A","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"],
            ["1","1","0","0"],["1","0","1","0"],["1","1","1","1"],["1","2","3","4"]]}"#;
        assert!(matches!(parse(unbound), Err(Error::UnboundParameter(_))));
    }

    #[test]
    fn family_one_with_equal_parameters_is_arrangement_two() {
        // A=1, B=1 turns the eighth plane into x+t: still eight distinct
        // planes, but the counters land on the rigid row, not the family's
        let params = catalog::parse_params("A=1,B=1").unwrap();
        let err = catalog::get_with_params("f1", &params).unwrap_err();
        assert!(err.to_string().contains("degenerate"));
        let e2 = catalog::entry("2").unwrap();
        let doc = ArrangementDocument {
            name: "f1 at A=B=1".into(),
            planes: catalog::entry("f1")
                .unwrap()
                .planes
                .iter()
                .map(|p| p.map(str::to_string))
                .collect(),
            scale: None,
            params: params.clone(),
        };
        let arr = doc.to_arrangement().unwrap();
        assert_eq!(arr.classify().counters, e2.expected.counters);
    }

    #[test]
    fn expression_evaluation() {
        let params: BTreeMap<char, Rat> =
            [('A', Rat::from_int(1)), ('D', Rat::from_int(7))].into();
        assert_eq!(expr::eval("-D/(1-D)", &params).unwrap(), Rat::new(7, 6));
        assert_eq!(expr::eval("A^2+3*A", &params).unwrap(), Rat::from_int(4));
        assert_eq!(expr::eval(" -2 ", &params).unwrap(), Rat::from_int(-2));
        assert!(expr::eval("B+1", &params).is_err());
        assert!(expr::eval("1/(A-1)", &params).is_err());
        assert!(expr::eval("2**3", &params).is_err());
    }

    #[test]
    fn scales_must_be_squarefree() {
        assert!(Arrangement::with_forms("s", vec![form([1, 0, 0, 0])], 4).is_err());
        assert!(Arrangement::with_forms("s", vec![form([1, 0, 0, 0])], 0).is_err());
        assert!(Arrangement::with_forms("s", vec![form([1, 0, 0, 0])], -6).is_ok());
    }
}
