//! Truncated interpretations, the one-step consequence operator and its
//! greatest fixed point on the depth-`k` lattice.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::kernel::reduce::whnf;
use crate::kernel::{SimpleType, Sym, SymbolTable, Term, DEFAULT_FUEL};
use crate::logic::{normalize_to_horn, Formula, Program};

use super::coterm::{interpret_guarded, Tree};
use super::HerbrandError;

/// Largest truncated base enumerated exactly; bigger ones are explored
/// from the queried atom.
pub const EXACT_BASE_LIMIT: usize = 20_000;

const LOCAL_NODE_LIMIT: usize = 200_000;

/// A ground atom whose arguments are cut so that the atom has depth `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedAtom {
    pub pred: Sym,
    pub args: Vec<Tree>,
}

impl TruncatedAtom {
    pub fn leq(&self, other: &TruncatedAtom) -> bool {
        self.pred == other.pred
            && self.args.len() == other.args.len()
            && self.args.iter().zip(&other.args).all(|(a, b)| a.leq(b))
    }

    fn has_bot(&self) -> bool {
        self.args.iter().any(Tree::has_bot)
    }
}

impl fmt::Display for TruncatedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        for a in &self.args {
            match a {
                Tree::Node(_, cs) if !cs.is_empty() => write!(f, " ({})", a)?,
                _ => write!(f, " {}", a)?,
            }
        }
        Ok(())
    }
}

/// A finite set of truncated atoms at a common depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub depth: usize,
    pub atoms: BTreeSet<TruncatedAtom>,
}

impl Interpretation {
    pub fn new(depth: usize) -> Interpretation {
        Interpretation {
            depth,
            atoms: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, a: &TruncatedAtom) -> bool {
        self.atoms.contains(a)
    }

    /// Some member refines `b`.
    pub fn covers(&self, b: &TruncatedAtom) -> bool {
        if self.atoms.contains(b) {
            return true;
        }
        if !b.has_bot() {
            return false;
        }
        let lo = TruncatedAtom {
            pred: b.pred.clone(),
            args: Vec::new(),
        };
        self.atoms
            .range(lo..)
            .take_while(|m| m.pred == b.pred)
            .any(|m| b.leq(m))
    }
}

/// A Horn clause with its variables opened as metavariables `?0 … ?n-1`.
#[derive(Clone, Debug)]
pub struct OpenClause {
    pub vars: usize,
    pub head: (Sym, Vec<Term>),
    pub body: Vec<(Sym, Vec<Term>)>,
}

/// Normalizes the program's clauses into opened Horn clauses.
pub fn horn_clauses(p: &Program) -> Result<Vec<OpenClause>, HerbrandError> {
    let ds: Vec<Formula> = p.clauses.iter().map(|c| c.formula.clone()).collect();
    let hs = normalize_to_horn(&ds)?;
    let mut out = Vec::new();
    for h in hs {
        let n = h.vars.len();
        let open = |f: &Formula| {
            (0..n)
                .rev()
                .fold(f.clone(), |acc, i| acc.instantiate(&Term::Meta(i)))
        };
        let atom = |f: Formula| match f {
            Formula::Atom(p, args) => Ok((p, args)),
            _ => Err(HerbrandError::NotHorn),
        };
        let body = h
            .body
            .iter()
            .filter(|b| **b != Formula::Top)
            .map(|b| atom(open(b)))
            .collect::<Result<Vec<_>, _>>()?;
        match h.head {
            Formula::Top => continue,
            ref hd => out.push(OpenClause {
                vars: n,
                head: atom(open(hd))?,
                body,
            }),
        }
    }
    Ok(out)
}

/// Matches a clause term against a truncated tree at remaining depth `d`,
/// joining what is learned about each variable into `theta`.
fn match_term(p: &Term, t: &Tree, d: usize, theta: &mut [Tree]) -> Result<bool, HerbrandError> {
    let Tree::Node(g, ts) = t else {
        return Ok(true);
    };
    let w = whnf(p, DEFAULT_FUEL).map_err(|e| HerbrandError::NotGuarded(e.to_string()))?;
    let (h, args) = w.spine();
    match h {
        Term::Meta(i) if args.is_empty() => match theta[*i].join(t) {
            Some(j) => {
                theta[*i] = j;
                Ok(true)
            }
            None => Ok(false),
        },
        Term::Const(c) => {
            if c != g || args.len() != ts.len() {
                return Ok(false);
            }
            for (a, s) in args.iter().zip(ts) {
                if !match_term(a, s, d.saturating_sub(1), theta)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(HerbrandError::NotGuarded(format!("{:?}", w))),
    }
}

/// The truncation of `p[θ]` at remaining depth `d`.
fn instantiate(p: &Term, theta: &[Tree], d: usize) -> Result<Tree, HerbrandError> {
    let w = whnf(p, DEFAULT_FUEL).map_err(|e| HerbrandError::NotGuarded(e.to_string()))?;
    let (h, args) = w.spine();
    match h {
        Term::Meta(i) if args.is_empty() => Ok(theta[*i].cut(d)),
        Term::Const(c) if args.is_empty() => Ok(Tree::Node(c.clone(), Vec::new())),
        Term::Const(_) if d == 0 => Ok(Tree::Bot),
        Term::Const(c) => Ok(Tree::Node(
            c.clone(),
            args.iter()
                .map(|a| instantiate(a, theta, d - 1))
                .collect::<Result<_, _>>()?,
        )),
        _ => Err(HerbrandError::NotGuarded(format!("{:?}", w))),
    }
}

/// The body instances of `clause` whose head truncates to `x`, if it does.
/// Variables not fixed by the head stay `⊥`. With `exact` unset the head
/// only has to refine `x`, which treats every `⊥` of `x` as unknown.
pub fn clause_support(
    clause: &OpenClause,
    x: &TruncatedAtom,
    k: usize,
    exact: bool,
) -> Result<Option<Vec<TruncatedAtom>>, HerbrandError> {
    let (p, args) = &clause.head;
    if *p != x.pred || args.len() != x.args.len() {
        return Ok(None);
    }
    let d = k.saturating_sub(1);
    let mut theta = vec![Tree::Bot; clause.vars];
    for (a, t) in args.iter().zip(&x.args) {
        if !match_term(a, t, d, &mut theta)? {
            return Ok(None);
        }
    }
    for (a, t) in args.iter().zip(&x.args) {
        let h = instantiate(a, &theta, d)?;
        if if exact { h != *t } else { !t.leq(&h) } {
            return Ok(None);
        }
    }
    let mut body = Vec::with_capacity(clause.body.len());
    for (q, bargs) in &clause.body {
        let args = bargs
            .iter()
            .map(|a| instantiate(a, &theta, d))
            .collect::<Result<_, _>>()?;
        body.push(TruncatedAtom {
            pred: q.clone(),
            args,
        });
    }
    Ok(Some(body))
}

/// `x ∈ Φ_P(i)`.
pub fn supported(
    clauses: &[OpenClause],
    x: &TruncatedAtom,
    i: &Interpretation,
) -> Result<bool, HerbrandError> {
    for c in clauses {
        if let Some(body) = clause_support(c, x, i.depth, true)? {
            if body.iter().all(|b| i.covers(b)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Trees of remaining depth `d` over the first-order constants of base
/// result type.
pub fn universe(sig: &crate::kernel::Signature, d: usize) -> Result<Vec<Tree>, HerbrandError> {
    let mut nullary = Vec::new();
    let mut ctors = Vec::new();
    for (c, ty) in &sig.consts {
        match ty.arity() {
            Some(0) => nullary.push(c.clone()),
            Some(n) if *ty == SimpleType::first_order(n) => ctors.push((c.clone(), n)),
            _ => {}
        }
    }
    let mut level: Vec<Tree> = nullary
        .iter()
        .map(|c| Tree::Node(c.clone(), Vec::new()))
        .collect();
    if !ctors.is_empty() {
        level.push(Tree::Bot);
    }
    for _ in 0..d {
        let mut next: Vec<Tree> = nullary
            .iter()
            .map(|c| Tree::Node(c.clone(), Vec::new()))
            .collect();
        for (c, n) in &ctors {
            let count = level
                .len()
                .checked_pow(*n as u32)
                .filter(|&m| m <= EXACT_BASE_LIMIT);
            if count.is_none() {
                return Err(HerbrandError::TooLarge(usize::MAX));
            }
            for args in product(&level, *n) {
                next.push(Tree::Node(c.clone(), args));
            }
            if next.len() > EXACT_BASE_LIMIT {
                return Err(HerbrandError::TooLarge(next.len()));
            }
        }
        level = next;
    }
    Ok(level)
}

fn product(items: &[Tree], n: usize) -> Vec<Vec<Tree>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// The full truncated Herbrand base at depth `k`.
pub fn herbrand_base(
    sig: &crate::kernel::Signature,
    k: usize,
) -> Result<Interpretation, HerbrandError> {
    let u = universe(sig, k.saturating_sub(1))?;
    let mut out = Interpretation::new(k);
    for (p, ty) in &sig.preds {
        if !ty.args.iter().all(SimpleType::is_base) {
            return Err(HerbrandError::NotFirstOrder(p.to_string()));
        }
        let count = u
            .len()
            .checked_pow(ty.args.len() as u32)
            .unwrap_or(usize::MAX);
        if count.saturating_add(out.len()) > EXACT_BASE_LIMIT {
            return Err(HerbrandError::TooLarge(count));
        }
        for args in product(&u, ty.args.len()) {
            out.atoms.insert(TruncatedAtom {
                pred: p.clone(),
                args,
            });
        }
    }
    Ok(out)
}

/// One application of the truncated consequence operator: the atoms of the
/// depth-`k` base supported by a clause instance whose body atoms are each
/// refined by a member of `i`.
pub fn phi_step(
    p: &Program,
    i: &Interpretation,
    k: usize,
) -> Result<Interpretation, HerbrandError> {
    let clauses = horn_clauses(p)?;
    let base = herbrand_base(&p.sig, k)?;
    let i = Interpretation {
        depth: k,
        atoms: i.atoms.clone(),
    };
    let mut out = Interpretation::new(k);
    for x in base.atoms {
        if supported(&clauses, &x, &i)? {
            out.atoms.insert(x);
        }
    }
    Ok(out)
}

/// The greatest fixed point of [`phi_step`] on the depth-`k` lattice, by
/// descending iteration from the full base.
pub fn gfp_truncated(p: &Program, k: usize) -> Result<Interpretation, HerbrandError> {
    let clauses = horn_clauses(p)?;
    let mut cur = herbrand_base(&p.sig, k)?;
    loop {
        let mut next = Interpretation::new(k);
        for x in &cur.atoms {
            if supported(&clauses, x, &cur)? {
                next.atoms.insert(x.clone());
            }
        }
        if next.len() == cur.len() {
            return Ok(next);
        }
        cur = next;
    }
}

/// `truncate(⟦A⟧, k)` for a ground atom.
pub fn truncate_atom(
    sig: &dyn SymbolTable,
    a: &Formula,
    k: usize,
) -> Result<TruncatedAtom, HerbrandError> {
    let Formula::Atom(p, args) = a else {
        return Err(HerbrandError::NotGround("not an atom".into()));
    };
    if a.has_meta() || !a.is_closed() {
        return Err(HerbrandError::NotGround(format!("{:?}", a)));
    }
    let args = args
        .iter()
        .map(|t| interpret_guarded(sig, t)?.truncate(k.saturating_sub(1)))
        .collect::<Result<_, _>>()?;
    Ok(TruncatedAtom {
        pred: p.clone(),
        args,
    })
}

/// Whether the `k`-truncation of a ground atom is refined by a member of the
/// truncated greatest fixed point. Bases above [`EXACT_BASE_LIMIT`] are
/// handled by [`local_member`].
pub fn model_member(p: &Program, a: &Formula, k: usize) -> Result<bool, HerbrandError> {
    let x = truncate_atom(&p.sig, a, k)?;
    match gfp_truncated(p, k) {
        Ok(m) => Ok(m.covers(&x)),
        Err(HerbrandError::TooLarge(_)) => local_member(p, &x, k),
        Err(e) => Err(e),
    }
}

/// Greatest fixed point over the truncated atoms reachable from `x` through
/// clause bodies, where `⊥` left by variables absent from a clause head is
/// kept as unknown. Over-approximates exact membership.
pub fn local_member(p: &Program, x: &TruncatedAtom, k: usize) -> Result<bool, HerbrandError> {
    let clauses = horn_clauses(p)?;
    let mut index: HashMap<TruncatedAtom, usize> = HashMap::new();
    let mut options: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(x.clone(), 0);
    options.push(Vec::new());
    queue.push_back(x.clone());
    while let Some(y) = queue.pop_front() {
        let id = index[&y];
        let mut opts = Vec::new();
        for c in &clauses {
            let Some(body) = clause_support(c, &y, k, false)? else {
                continue;
            };
            let mut ids = Vec::with_capacity(body.len());
            for b in body {
                let next = index.len();
                let j = *index.entry(b.clone()).or_insert_with(|| {
                    queue.push_back(b);
                    next
                });
                if j == options.len() {
                    options.push(Vec::new());
                }
                ids.push(j);
            }
            opts.push(ids);
        }
        options[id] = opts;
        if index.len() > LOCAL_NODE_LIMIT {
            return Err(HerbrandError::TooLarge(index.len()));
        }
    }
    let mut alive = vec![true; options.len()];
    loop {
        let mut changed = false;
        for i in 0..options.len() {
            if alive[i] && !options[i].iter().any(|o| o.iter().all(|&j| alive[j])) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            return Ok(alive[0]);
        }
    }
}
