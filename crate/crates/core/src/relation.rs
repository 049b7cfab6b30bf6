use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::point::Point;

/// Closed-form rule deciding `x ⪰ y`.
pub type Rule = Arc<dyn Fn(&Point, &Point) -> bool + Send + Sync>;

/// A named utility function `u : ℝⁿ → ℝ`.
#[derive(Clone)]
pub struct Utility {
    name: String,
    eval: Arc<dyn Fn(&Point) -> f64 + Send + Sync>,
}

impl Utility {
    pub fn new(name: impl Into<String>, eval: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Utility { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &Point) -> f64 {
        (self.eval)(x)
    }
}

impl fmt::Debug for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Utility({})", self.name)
    }
}

#[derive(Clone)]
pub enum RelationKind {
    Predicate {
        name: String,
        rule: Rule,
    },
    UtilityBacked {
        utility: Utility,
        lipschitz: Option<f64>,
        quasiconcave: bool,
    },
    /// `matrix[i][j]` is `ground[i] ⪰ ground[j]`.
    TabularFinite {
        ground: Vec<Point>,
        matrix: Vec<Vec<bool>>,
    },
}

/// A binary relation `⪰` on ℝⁿ (or on a finite subset, in tabular form).
#[derive(Clone)]
pub struct Relation {
    kind: RelationKind,
    dim: usize,
}

impl Relation {
    pub fn predicate(
        name: impl Into<String>,
        dim: usize,
        rule: impl Fn(&Point, &Point) -> bool + Send + Sync + 'static,
    ) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Relation { kind: RelationKind::Predicate { name: name.into(), rule: Arc::new(rule) }, dim }
    }

    /// `x ⪰ y ⇔ u(x) ≥ u(y)`.
    pub fn utility(dim: usize, utility: Utility, lipschitz: Option<f64>, quasiconcave: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRelation("dimension must be positive".into()));
        }
        if let Some(l) = lipschitz {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidRelation(format!("Lipschitz bound must be positive, got {l}")));
            }
        }
        Ok(Relation { kind: RelationKind::UtilityBacked { utility, lipschitz, quasiconcave }, dim })
    }

    pub fn tabular(ground: Vec<Point>, matrix: Vec<Vec<bool>>) -> Result<Self> {
        let Some(first) = ground.first() else {
            return Err(Error::InvalidRelation("tabular ground must be non-empty".into()));
        };
        let dim = first.dim();
        for p in &ground {
            check_dim(dim, p.dim())?;
        }
        if matrix.len() != ground.len() || matrix.iter().any(|row| row.len() != ground.len()) {
            return Err(Error::InvalidRelation(format!(
                "tabular matrix must be {n}×{n}",
                n = ground.len()
            )));
        }
        Ok(Relation { kind: RelationKind::TabularFinite { ground, matrix }, dim })
    }

    pub fn kind(&self) -> &RelationKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> String {
        match &self.kind {
            RelationKind::Predicate { name, .. } => name.clone(),
            RelationKind::UtilityBacked { utility, .. } => format!("utility[{}]", utility.name()),
            RelationKind::TabularFinite { ground, .. } => format!("tabular[{}]", ground.len()),
        }
    }

    pub fn utility_fn(&self) -> Option<&Utility> {
        match &self.kind {
            RelationKind::UtilityBacked { utility, .. } => Some(utility),
            _ => None,
        }
    }

    /// `x ⪰ y`.
    pub fn holds(&self, x: &Point, y: &Point) -> Result<bool> {
        check_dim(self.dim, x.dim())?;
        check_dim(self.dim, y.dim())?;
        Ok(match &self.kind {
            RelationKind::Predicate { rule, .. } => rule(x, y),
            RelationKind::UtilityBacked { utility, .. } => utility.eval(x) >= utility.eval(y),
            RelationKind::TabularFinite { ground, matrix } => {
                let i = tabular_index(ground, x)?;
                let j = tabular_index(ground, y)?;
                matrix[i][j]
            }
        })
    }

    /// `y ≻ x`: `y ⪰ x` and not `x ⪰ y`.
    pub fn strictly_prefers(&self, y: &Point, x: &Point) -> Result<bool> {
        Ok(self.holds(y, x)? && !self.holds(x, y)?)
    }
}

fn tabular_index(ground: &[Point], p: &Point) -> Result<usize> {
    ground
        .iter()
        .position(|q| q.approx_eq(p))
        .ok_or_else(|| Error::NotInGround(p.to_string()))
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation").field("name", &self.name()).field("dim", &self.dim).finish()
    }
}
