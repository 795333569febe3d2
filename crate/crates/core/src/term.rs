//! Object and morphism terms of finitely presented strict lcc categories.
//!
//! Terms are immutable trees behind `Arc`. Every node caches its structural
//! hash and size, so equality is a pointer check in the common case and a
//! hash-guarded structural comparison otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Reference to a realized marking whose comparison map has a formal inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkRef {
    /// A marking declared by the presentation itself (index into its marking list).
    Declared(usize),
    /// A marking of a lifted presentation: the image of a universal diagram of the base.
    Lift(LiftMark),
}

/// Universal diagrams of a base context, regarded as markings of its lift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftMark {
    Declared(usize),
    Tm,
    Pb(Mor, Mor),
    Pi(Mor, Mor),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjKind {
    Gen(Name),
    One,
    Pb(Mor, Mor),
    Pi(Mor, Mor),
    Lifted(Obj),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorKind {
    Gen(Name),
    Id(Obj),
    /// `Comp(g, f)` is `g ∘ f`.
    Comp(Mor, Mor),
    Bang(Obj),
    P1(Mor, Mor),
    P2(Mor, Mor),
    PbPair { f1: Mor, f2: Mor, q1: Mor, q2: Mor },
    PiMap(Mor, Mor),
    Eval(Mor, Mor),
    Curry { f1: Mor, g: Mor, f2: Mor, e: Mor },
    MarkInv(MarkRef),
    LiftedGen(Mor),
}

struct Node<K> {
    hash: u64,
    size: usize,
    kind: K,
}

fn structural_hash<K: Hash>(tag: u8, kind: &K) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    tag.hash(&mut h);
    kind.hash(&mut h);
    h.finish()
}

#[derive(Clone)]
pub struct Obj(Arc<Node<ObjKind>>);

#[derive(Clone)]
pub struct Mor(Arc<Node<MorKind>>);

impl Obj {
    pub fn new(kind: ObjKind) -> Self {
        let size = 1 + match &kind {
            ObjKind::Gen(_) | ObjKind::One => 0,
            ObjKind::Pb(a, b) | ObjKind::Pi(a, b) => a.size() + b.size(),
            ObjKind::Lifted(x) => x.size(),
        };
        let hash = structural_hash(0, &kind);
        Obj(Arc::new(Node { hash, size, kind }))
    }
    pub fn kind(&self) -> &ObjKind {
        &self.0.kind
    }
    pub fn size(&self) -> usize {
        self.0.size
    }
    pub fn gen(n: &str) -> Self {
        Obj::new(ObjKind::Gen(name(n)))
    }
    pub fn one() -> Self {
        Obj::new(ObjKind::One)
    }
    pub fn pb(f1: Mor, f2: Mor) -> Self {
        Obj::new(ObjKind::Pb(f1, f2))
    }
    pub fn pi(f1: Mor, g: Mor) -> Self {
        Obj::new(ObjKind::Pi(f1, g))
    }
    pub fn lifted(x: Obj) -> Self {
        Obj::new(ObjKind::Lifted(x))
    }
    pub fn is_one(&self) -> bool {
        matches!(self.kind(), ObjKind::One)
    }
}

impl Mor {
    pub fn new(kind: MorKind) -> Self {
        let size = 1 + match &kind {
            MorKind::Gen(_) | MorKind::MarkInv(_) => 0,
            MorKind::Id(a) | MorKind::Bang(a) => a.size(),
            MorKind::Comp(a, b)
            | MorKind::P1(a, b)
            | MorKind::P2(a, b)
            | MorKind::PiMap(a, b)
            | MorKind::Eval(a, b) => a.size() + b.size(),
            MorKind::PbPair { f1, f2, q1, q2 } => f1.size() + f2.size() + q1.size() + q2.size(),
            MorKind::Curry { f1, g, f2, e } => f1.size() + g.size() + f2.size() + e.size(),
            MorKind::LiftedGen(f) => f.size(),
        };
        let hash = structural_hash(1, &kind);
        Mor(Arc::new(Node { hash, size, kind }))
    }
    pub fn kind(&self) -> &MorKind {
        &self.0.kind
    }
    pub fn size(&self) -> usize {
        self.0.size
    }
    pub fn gen(n: &str) -> Self {
        Mor::new(MorKind::Gen(name(n)))
    }
    pub fn id(a: Obj) -> Self {
        Mor::new(MorKind::Id(a))
    }
    pub fn comp(g: Mor, f: Mor) -> Self {
        Mor::new(MorKind::Comp(g, f))
    }
    /// `comp_all([a, b, c])` is `a ∘ (b ∘ c)`.
    pub fn comp_all<I: IntoIterator<Item = Mor>>(items: I) -> Option<Self> {
        let mut v: Vec<Mor> = items.into_iter().collect();
        let mut acc = v.pop()?;
        while let Some(g) = v.pop() {
            acc = Mor::comp(g, acc);
        }
        Some(acc)
    }
    pub fn bang(a: Obj) -> Self {
        Mor::new(MorKind::Bang(a))
    }
    pub fn p1(f1: Mor, f2: Mor) -> Self {
        Mor::new(MorKind::P1(f1, f2))
    }
    pub fn p2(f1: Mor, f2: Mor) -> Self {
        Mor::new(MorKind::P2(f1, f2))
    }
    pub fn pb_pair(f1: Mor, f2: Mor, q1: Mor, q2: Mor) -> Self {
        Mor::new(MorKind::PbPair { f1, f2, q1, q2 })
    }
    pub fn pi_map(f1: Mor, g: Mor) -> Self {
        Mor::new(MorKind::PiMap(f1, g))
    }
    pub fn eval(f1: Mor, g: Mor) -> Self {
        Mor::new(MorKind::Eval(f1, g))
    }
    pub fn curry(f1: Mor, g: Mor, f2: Mor, e: Mor) -> Self {
        Mor::new(MorKind::Curry { f1, g, f2, e })
    }
    pub fn mark_inv(m: MarkRef) -> Self {
        Mor::new(MorKind::MarkInv(m))
    }
    pub fn lifted_gen(f: Mor) -> Self {
        Mor::new(MorKind::LiftedGen(f))
    }
    pub fn is_gen_named(&self, n: &str) -> bool {
        matches!(self.kind(), MorKind::Gen(m) if &**m == n)
    }
    pub fn hash_id(&self) -> u64 {
        self.0.hash
    }
}

macro_rules! node_traits {
    ($t:ident) => {
        impl PartialEq for $t {
            fn eq(&self, other: &Self) -> bool {
                Arc::ptr_eq(&self.0, &other.0)
                    || (self.0.hash == other.0.hash
                        && self.0.size == other.0.size
                        && self.0.kind == other.0.kind)
            }
        }
        impl Eq for $t {}
        impl Hash for $t {
            fn hash<H: Hasher>(&self, state: &mut H) {
                state.write_u64(self.0.hash);
            }
        }
        impl PartialOrd for $t {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for $t {
            fn cmp(&self, other: &Self) -> Ordering {
                if Arc::ptr_eq(&self.0, &other.0) {
                    return Ordering::Equal;
                }
                self.0.size.cmp(&other.0.size).then_with(|| self.0.kind.cmp(&other.0.kind))
            }
        }
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self)
            }
        }
    };
}
node_traits!(Obj);
node_traits!(Mor);

impl Serialize for Obj {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.kind().serialize(s)
    }
}
impl<'de> Deserialize<'de> for Obj {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ObjKind::deserialize(d).map(Obj::new)
    }
}
impl Serialize for Mor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.kind().serialize(s)
    }
}
impl<'de> Deserialize<'de> for Mor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        MorKind::deserialize(d).map(Mor::new)
    }
}

impl fmt::Display for MarkRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkRef::Declared(i) => write!(f, "#{i}"),
            MarkRef::Lift(LiftMark::Declared(i)) => write!(f, "^#{i}"),
            MarkRef::Lift(LiftMark::Tm) => write!(f, "^tm"),
            MarkRef::Lift(LiftMark::Pb(a, b)) => write!(f, "^pb({a}, {b})"),
            MarkRef::Lift(LiftMark::Pi(a, b)) => write!(f, "^pi({a}, {b})"),
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            ObjKind::Gen(n) => write!(f, "{n}"),
            ObjKind::One => write!(f, "1"),
            ObjKind::Pb(a, b) => write!(f, "pb({a}, {b})"),
            ObjKind::Pi(a, b) => write!(f, "pi({a}, {b})"),
            ObjKind::Lifted(x) => write!(f, "^[{x}]"),
        }
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            MorKind::Gen(n) => write!(f, "{n}"),
            MorKind::Id(a) => write!(f, "id({a})"),
            MorKind::Comp(g, h) => write!(f, "({g} . {h})"),
            MorKind::Bang(a) => write!(f, "!({a})"),
            MorKind::P1(a, b) => write!(f, "p1({a}, {b})"),
            MorKind::P2(a, b) => write!(f, "p2({a}, {b})"),
            MorKind::PbPair { f1, f2, q1, q2 } => write!(f, "<{q1}, {q2} | {f1}, {f2}>"),
            MorKind::PiMap(a, b) => write!(f, "pimap({a}, {b})"),
            MorKind::Eval(a, b) => write!(f, "ev({a}, {b})"),
            MorKind::Curry { f1, g, f2, e } => write!(f, "cur({f1}, {g} | {f2}, {e})"),
            MorKind::MarkInv(m) => write!(f, "inv{m}"),
            MorKind::LiftedGen(x) => write!(f, "^[{x}]"),
        }
    }
}

/// Calls `visit` on every generator name occurring in a morphism term.
pub fn mor_mentions(m: &Mor, pred: &mut dyn FnMut(&Name) -> bool) -> bool {
    match m.kind() {
        MorKind::Gen(n) => pred(n),
        MorKind::Id(a) | MorKind::Bang(a) => obj_mentions(a, pred),
        MorKind::Comp(a, b)
        | MorKind::P1(a, b)
        | MorKind::P2(a, b)
        | MorKind::PiMap(a, b)
        | MorKind::Eval(a, b) => mor_mentions(a, pred) || mor_mentions(b, pred),
        MorKind::PbPair { f1, f2, q1, q2 } => {
            mor_mentions(f1, pred)
                || mor_mentions(f2, pred)
                || mor_mentions(q1, pred)
                || mor_mentions(q2, pred)
        }
        MorKind::Curry { f1, g, f2, e } => {
            mor_mentions(f1, pred) || mor_mentions(g, pred) || mor_mentions(f2, pred) || mor_mentions(e, pred)
        }
        MorKind::MarkInv(MarkRef::Lift(LiftMark::Pb(a, b) | LiftMark::Pi(a, b))) => {
            mor_mentions(a, pred) || mor_mentions(b, pred)
        }
        MorKind::MarkInv(_) => false,
        MorKind::LiftedGen(x) => mor_mentions(x, pred),
    }
}

pub fn obj_mentions(o: &Obj, pred: &mut dyn FnMut(&Name) -> bool) -> bool {
    match o.kind() {
        ObjKind::Gen(n) => pred(n),
        ObjKind::One => false,
        ObjKind::Pb(a, b) | ObjKind::Pi(a, b) => mor_mentions(a, pred) || mor_mentions(b, pred),
        ObjKind::Lifted(x) => obj_mentions(x, pred),
    }
}

/// True when the term contains any `Lifted`/`LiftedGen`/lift-marking node.
pub fn mor_is_lifted(m: &Mor) -> bool {
    match m.kind() {
        MorKind::LiftedGen(_) | MorKind::MarkInv(MarkRef::Lift(_)) => true,
        MorKind::Gen(_) | MorKind::MarkInv(_) => false,
        MorKind::Id(a) | MorKind::Bang(a) => obj_is_lifted(a),
        MorKind::Comp(a, b)
        | MorKind::P1(a, b)
        | MorKind::P2(a, b)
        | MorKind::PiMap(a, b)
        | MorKind::Eval(a, b) => mor_is_lifted(a) || mor_is_lifted(b),
        MorKind::PbPair { f1, f2, q1, q2 } => {
            mor_is_lifted(f1) || mor_is_lifted(f2) || mor_is_lifted(q1) || mor_is_lifted(q2)
        }
        MorKind::Curry { f1, g, f2, e } => {
            mor_is_lifted(f1) || mor_is_lifted(g) || mor_is_lifted(f2) || mor_is_lifted(e)
        }
    }
}

pub fn obj_is_lifted(o: &Obj) -> bool {
    match o.kind() {
        ObjKind::Lifted(_) => true,
        ObjKind::Gen(_) | ObjKind::One => false,
        ObjKind::Pb(a, b) | ObjKind::Pi(a, b) => mor_is_lifted(a) || mor_is_lifted(b),
    }
}
