//! Standard-form linear programs and the simplex backend.
//!
//! The optimizer only emits variables with bounds, linear rows and a linear
//! objective to minimize; [`LinearProgram::solve`] hands that to `microlp`
//! and re-checks the returned point against every row.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

/// Largest row violation accepted from the backend.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// Minimize `objective · x` subject to `rows` and `lower <= x <= upper`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Largest violation of any row or bound at `values`.
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpError {
    Infeasible,
    Unbounded,
    Failed(String),
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.bounds.push((lower, upper));
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        debug_assert!(terms.iter().all(|&(v, _)| v < self.objective.len()));
        self.rows.push(Row { terms, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(&cost, &bounds)| problem.add_var(cost, bounds))
            .collect();
        for row in &self.rows {
            let terms: Vec<_> = row.terms.iter().map(|&(v, c)| (vars[v], c)).collect();
            let op = match row.relation {
                Relation::Le => ComparisonOp::Le,
                Relation::Eq => ComparisonOp::Eq,
                Relation::Ge => ComparisonOp::Ge,
            };
            problem.add_constraint(terms, op, row.rhs);
        }
        let outcome = problem.solve().map_err(|e| match e {
            microlp::Error::Infeasible => LpError::Infeasible,
            microlp::Error::Unbounded => LpError::Unbounded,
            other => LpError::Failed(other.to_string()),
        })?;
        let solution = outcome
            .into_solution()
            .map_err(|interrupted| LpError::Failed(format!("{:?}", interrupted.termination_reason())))?;
        let values: Vec<f64> = vars.iter().map(|&v| solution.var_value(v)).collect();
        let max_violation = self.violation(&values);
        if max_violation > 1e3 * FEASIBILITY_TOLERANCE {
            return Err(LpError::Failed(format!(
                "solution violates constraints by {max_violation:e}"
            )));
        }
        Ok(LpSolution {
            objective: self.objective.iter().zip(&values).map(|(c, x)| c * x).sum(),
            values,
            max_violation,
        })
    }

    /// Largest violation of any row or bound at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|row| {
            let lhs: f64 = row.terms.iter().map(|&(v, c)| c * x[v]).sum();
            match row.relation {
                Relation::Le => (lhs - row.rhs).max(0.0),
                Relation::Ge => (row.rhs - lhs).max(0.0),
                Relation::Eq => (lhs - row.rhs).abs(),
            }
        });
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }
}
