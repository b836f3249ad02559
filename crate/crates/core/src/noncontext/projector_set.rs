use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Projector, CONSTRUCTION_TOL};

/// Stable identity of a projector within a [`ProjectorSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectorId(pub usize);

impl fmt::Display for ProjectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Entry {
    projector: Projector,
    aliases: Vec<String>,
}

/// Projectors with identities unified up to [`CONSTRUCTION_TOL`] entrywise.
///
/// The first projector inserted for an identity is its canonical
/// representative; later insertions are compared against representatives
/// only, so unification is an equivalence. Insertion never renumbers
/// existing identities.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    dim: usize,
    entries: Vec<Entry>,
}

impl ProjectorSet {
    pub fn new(dim: usize) -> Self {
        ProjectorSet {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ProjectorId> {
        (0..self.entries.len()).map(ProjectorId)
    }

    pub fn find(&self, p: &Projector) -> Option<ProjectorId> {
        self.entries
            .iter()
            .position(|e| e.projector.approx_eq(p, CONSTRUCTION_TOL))
            .map(ProjectorId)
    }

    /// Inserts `p`, or returns the identity it unifies with. `alias`, when
    /// given, is attached to the identity either way.
    pub fn insert(&mut self, p: Projector, alias: Option<&str>) -> Result<ProjectorId> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        let id = match self.find(&p) {
            Some(id) => id,
            None => {
                self.entries.push(Entry {
                    projector: p,
                    aliases: Vec::new(),
                });
                ProjectorId(self.entries.len() - 1)
            }
        };
        if let Some(a) = alias {
            let aliases = &mut self.entries[id.0].aliases;
            if !aliases.iter().any(|x| x == a) {
                aliases.push(a.to_string());
            }
        }
        Ok(id)
    }

    pub fn projector(&self, id: ProjectorId) -> &Projector {
        &self.entries[id.0].projector
    }

    pub fn aliases(&self, id: ProjectorId) -> &[String] {
        &self.entries[id.0].aliases
    }

    pub fn describe(&self, id: ProjectorId) -> String {
        self.projector(id).describe()
    }

    pub fn commutes(&self, a: ProjectorId, b: ProjectorId) -> bool {
        self.projector(a)
            .commutes_with(self.projector(b), CONSTRUCTION_TOL)
    }

    /// Unordered pairs `(a, b)`, `a < b`, with `‖[P_a, P_b]‖_max ≤ 1e-10`.
    pub fn commuting_pairs(&self) -> Vec<(ProjectorId, ProjectorId)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in (a + 1)..self.len() {
                if self.commutes(ProjectorId(a), ProjectorId(b)) {
                    out.push((ProjectorId(a), ProjectorId(b)));
                }
            }
        }
        out
    }

    /// Same identities and aliases with every projector mapped by `f`.
    pub fn map_projectors(&self, f: impl Fn(&Projector) -> Result<Projector>) -> Result<ProjectorSet> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(Entry {
                    projector: f(&e.projector)?,
                    aliases: e.aliases.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectorSet {
            dim: self.dim,
            entries,
        })
    }
}

/// Extends `ps` by `depth` rounds. Each round adds `I`, `0`, `I - P` for
/// every member, and `PQ`, `P + Q - PQ` for every commuting pair present at
/// the start of the round.
pub fn closure(ps: &ProjectorSet, depth: usize) -> ProjectorSet {
    let mut out = ps.clone();
    let d = ps.dim();
    for _ in 0..depth {
        let snapshot: Vec<ProjectorId> = out.ids().collect();
        let pairs = out.commuting_pairs();
        let mut fresh = vec![Projector::identity(d), Projector::zero(d)];
        fresh.extend(snapshot.iter().map(|&id| out.projector(id).complement()));
        for (a, b) in pairs {
            let (p, q) = (out.projector(a), out.projector(b));
            // commuting within tolerance makes both products valid projectors;
            // a pair sitting exactly on the tolerance edge is dropped
            if let Ok(m) = p.meet(q) {
                fresh.push(m);
            }
            if let Ok(j) = p.join(q) {
                fresh.push(j);
            }
        }
        let before = out.len();
        for p in fresh {
            out.insert(p, None).expect("closure stays in dimension");
        }
        if out.len() == before {
            break;
        }
    }
    out
}
