use crate::error::{Error, Result};
use crate::finrel::{FinFn, FinSet, Value};
use crate::report::{LawReport, Witness};

/// A commuting square
///
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C --bottom-> D
/// ```
#[derive(Clone, Debug)]
pub struct Square {
    pub top: FinFn,
    pub left: FinFn,
    pub right: FinFn,
    pub bottom: FinFn,
}

impl Square {
    /// Validates shapes and commutativity (`bottom∘left = right∘top`).
    pub fn new(top: FinFn, left: FinFn, right: FinFn, bottom: FinFn) -> Result<Square> {
        top.dom().require_same(left.dom(), "square apex")?;
        top.cod().require_same(right.dom(), "square right edge")?;
        left.cod().require_same(bottom.dom(), "square bottom edge")?;
        right.cod().require_same(bottom.cod(), "square corner")?;
        for a in top.dom().iter() {
            let via_top = right.apply(&top.apply(a)?)?;
            let via_left = bottom.apply(&left.apply(a)?)?;
            if via_top != via_left {
                return Err(Error::NonCommuting(format!("{a}: {via_top} vs {via_left}")));
            }
        }
        Ok(Square { top, left, right, bottom })
    }

    pub fn apex(&self) -> &FinSet {
        self.top.dom()
    }
}

/// The pullback of `B -right-> D <-bottom- C`, as pairs `(b, c)`.
pub fn pullback(right: &FinFn, bottom: &FinFn) -> Result<FinSet> {
    right.cod().require_same(bottom.cod(), "cospan")?;
    let mut pts = Vec::new();
    for (b, db) in right.pairs() {
        for (c, dc) in bottom.pairs() {
            if db == dc {
                pts.push(Value::pair(b.clone(), c.clone()));
            }
        }
    }
    Ok(FinSet::new(format!("{}×{}", right.dom().name(), bottom.dom().name()), pts))
}

/// First pullback element not hit by the comparison map, if any.
pub fn weak_pullback_gap(sq: &Square) -> Result<Option<Value>> {
    let pb = pullback(&sq.right, &sq.bottom)?;
    let mut hit = vec![false; pb.len()];
    for a in sq.apex().iter() {
        let pt = Value::pair(sq.top.apply(a)?, sq.left.apply(a)?);
        hit[pb.index_or_err(&pt)?] = true;
    }
    Ok(hit.iter().position(|h| !h).map(|i| pb.elements()[i].clone()))
}

/// Surjectivity of the comparison map into the pullback.
pub fn is_weak_pullback(sq: &Square) -> Result<LawReport> {
    let name = "weak pullback";
    let anchor = "the induced comparison map into the pullback is an epimorphism";
    let pb_len = pullback(&sq.right, &sq.bottom)?.len() as u64;
    Ok(match weak_pullback_gap(sq)? {
        None => LawReport::pass(name, anchor, pb_len),
        Some(pt) => LawReport::fail(name, anchor, pb_len, Witness::new("pullback element with no preimage", pt)),
    })
}

/// Splits an idempotent `e = i∘p` through its image, with `p∘i = id`.
pub fn split_idempotent(e: &FinFn) -> Result<(FinFn, FinFn)> {
    e.dom().require_same(e.cod(), "idempotent")?;
    for (a, b) in e.pairs() {
        if e.apply(b)? != *b {
            return Err(Error::NotIdempotent(format!("{a} ↦ {b} ↦ {}", e.apply(b)?)));
        }
    }
    let image = FinSet::new(format!("im {}", e.dom().name()), e.images().iter().cloned());
    let image = if image.len() == e.dom().len() { e.dom().clone() } else { image };
    let p = e.with_cod(&image)?;
    let i = FinFn::new(&image, e.cod(), |v| Ok(v.clone()))?;
    Ok((p, i))
}
