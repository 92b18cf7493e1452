//! One-stop pipeline from a fundamental domain to the action function.

use crate::action::ActionFunction;
use crate::covers::{maximizer_graph, surface_tension_table, MaximizerGraph, SurfaceTensionTable};
use crate::error::{Error, Result};
use crate::gibbs0::{gibbs_measure, GibbsZeroMeasure};
use crate::kirchhoff::{derive_primal, solve_dual, DualActionFunction, PrimalGradients};
use crate::lattice::{build_torus_graph, FundamentalDomain, Slope, TorusGraph};
use crate::newton::{build_subdivision, classify_genericity, GenericityReport, Subdivision};
use crate::tropical_curve::{build_curve, TropicalCurve};

/// Stages that only exist when the subdivision is smooth.
#[derive(Debug, Clone)]
pub struct SmoothStages {
    pub curve: TropicalCurve,
    pub fstar: DualActionFunction,
    pub primal: PrimalGradients,
}

#[derive(Debug, Clone)]
pub struct TropicalModel {
    pub domain: FundamentalDomain,
    pub graph: TorusGraph,
    pub table: SurfaceTensionTable,
    pub subdivision: Subdivision,
    pub genericity: GenericityReport,
    pub smooth: Option<SmoothStages>,
}

impl TropicalModel {
    pub fn from_domain(domain: FundamentalDomain) -> Result<Self> {
        let graph = build_torus_graph(&domain);
        let table = surface_tension_table(&graph)?;
        let subdivision = build_subdivision(&table);
        let genericity = classify_genericity(&subdivision);
        let smooth = if genericity.smooth {
            let curve = build_curve(&subdivision, &table)?;
            let fstar = solve_dual(&subdivision, &curve)?;
            let primal = derive_primal(&subdivision, &curve, &fstar)?;
            Some(SmoothStages { curve, fstar, primal })
        } else {
            None
        };
        Ok(TropicalModel { domain, graph, table, subdivision, genericity, smooth })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_domain(FundamentalDomain::from_json_str(text)?)
    }

    pub fn stages(&self) -> Result<&SmoothStages> {
        self.smooth.as_ref().ok_or(Error::NotSmooth)
    }

    pub fn curve(&self) -> Result<&TropicalCurve> {
        Ok(&self.stages()?.curve)
    }

    pub fn action(&self) -> Result<ActionFunction<'_>> {
        let s = self.stages()?;
        Ok(ActionFunction::new(&self.subdivision, &s.curve, &s.fstar, &s.primal))
    }

    pub fn maximizer_graph(&self, mu: Slope) -> MaximizerGraph {
        maximizer_graph(&self.table, &self.graph, mu)
    }

    pub fn gibbs(&self, mu: Slope) -> Result<GibbsZeroMeasure> {
        gibbs_measure(&self.graph, &self.maximizer_graph(mu))
    }
}
