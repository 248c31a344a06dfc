//! Per-role operation tallies.
//!
//! Every thread keeps a stack of open scopes. Instrumented operations add to the
//! innermost scope; closing a scope returns its tally and merges it into the
//! enclosing one. Work done with no scope open is still recorded, in an
//! implicit root scope nobody reads.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, AddAssign};

use super::GroupTag;

/// The party an operation is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Preparator,
    Trustee,
    Prover,
    Verifier,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Preparator => "preparator",
            Role::Trustee => "trustee",
            Role::Prover => "prover",
            Role::Verifier => "verifier",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Operations on full-size field elements.
    pub field_ops: u64,
    /// Operations on machine-word values (integer-lifted small-field variant).
    pub small_ops: u64,
    pub g1_exp: u64,
    pub g2_exp: u64,
    pub gt_exp: u64,
    pub pairings: u64,
}

impl OpCounts {
    /// All group exponentiations, regardless of group.
    pub fn group_exps(&self) -> u64 {
        self.g1_exp + self.g2_exp + self.gt_exp
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, o: Self) {
        self.field_ops += o.field_ops;
        self.small_ops += o.small_ops;
        self.g1_exp += o.g1_exp;
        self.g2_exp += o.g2_exp;
        self.gt_exp += o.gt_exp;
        self.pairings += o.pairings;
    }
}

impl Add for OpCounts {
    type Output = OpCounts;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoleReport {
    pub role: Role,
    pub counts: OpCounts,
}

thread_local! {
    static STACK: RefCell<Vec<OpCounts>> = RefCell::new(vec![OpCounts::default()]);
}

fn with_top(f: impl FnOnce(&mut OpCounts)) {
    STACK.with(|s| {
        let mut s = s.borrow_mut();
        let top = s.last_mut().expect("root scope is never popped");
        f(top);
    });
}

pub fn record_field_ops(n: u64) {
    with_top(|c| c.field_ops += n);
}

pub fn record_small_ops(n: u64) {
    with_top(|c| c.small_ops += n);
}

pub fn record_exps(tag: GroupTag, n: u64) {
    with_top(|c| match tag {
        GroupTag::G1 => c.g1_exp += n,
        GroupTag::G2 => c.g2_exp += n,
        GroupTag::Gt => c.gt_exp += n,
    });
}

pub fn record_pairings(n: u64) {
    with_top(|c| c.pairings += n);
}

/// An open counting scope. Close it with [`Scope::finish`]; dropping it
/// without finishing still merges the tally into the parent.
#[must_use = "a scope counts nothing useful unless finished"]
pub struct Scope {
    role: Role,
    depth: usize,
    closed: bool,
}

/// Opens a fresh scope attributed to `role` on the current thread.
pub fn scope(role: Role) -> Scope {
    let depth = STACK.with(|s| {
        let mut s = s.borrow_mut();
        s.push(OpCounts::default());
        s.len()
    });
    Scope {
        role,
        depth,
        closed: false,
    }
}

impl Scope {
    pub fn role(&self) -> Role {
        self.role
    }

    /// Tally so far, without closing.
    pub fn snapshot(&self) -> OpCounts {
        STACK.with(|s| s.borrow()[self.depth - 1])
    }

    pub fn finish(mut self) -> RoleReport {
        let counts = self.close();
        RoleReport {
            role: self.role,
            counts,
        }
    }

    fn close(&mut self) -> OpCounts {
        self.closed = true;
        STACK.with(|s| {
            let mut s = s.borrow_mut();
            assert_eq!(s.len(), self.depth, "counting scopes closed out of order");
            let mine = s.pop().expect("scope present");
            *s.last_mut().expect("root scope") += mine;
            mine
        })
    }
}

impl Drop for Scope {
    fn drop(&mut self) {
        if !self.closed {
            self.close();
        }
    }
}

/// Runs `f` inside a scope for `role`, returning its value and tally.
pub fn measure<T>(role: Role, f: impl FnOnce() -> T) -> (T, RoleReport) {
    let s = scope(role);
    let out = f();
    (out, s.finish())
}
