use std::fmt::Write;

use kk_core::experiments::ExperimentSummary;
use kk_core::kings::EstablishCheck;
use kk_core::{
    Composition, DigraphClass, Distance, FactorKingClassification, KernelCertificate, KingExistence,
    KingReport, OuterReport,
};
use serde::Serialize;

/// A report printable either as JSON or as a plain-text table.
pub trait Report: Serialize {
    fn text(&self) -> String;
}

fn ids(v: &[usize]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn cert_line(c: &KernelCertificate) -> String {
    let kind = match c.k {
        Some(k) => format!("{k}-kernel"),
        None => "quasi-kernel".into(),
    };
    format!("{kind} {{{}}} validated={}", ids(&c.vertices), c.validated)
}

#[derive(Serialize)]
pub struct KingsOut {
    #[serde(flatten)]
    pub report: KingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization: Option<KingExistence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_kings: Option<bool>,
}

impl Report for KingsOut {
    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!("k = {}\nkings: {}\nstrict: {}\n\nvertex  ecc  king\n", r.k, ids(&r.kings), ids(&r.strict));
        for (v, e) in r.ecc_out.iter().enumerate() {
            let e = match e {
                Distance::Finite(d) => d.to_string(),
                Distance::Unreachable => "inf".into(),
            };
            let mark = if r.is_king(v) { "yes" } else { "" };
            writeln!(s, "{v:>6}  {e:>3}  {mark}").unwrap();
        }
        if let Some(c) = &self.characterization {
            writeln!(s, "\ncharacterization: exists={}", c.exists).unwrap();
            if let (Some(f), Some(reason)) = (c.witness_factor, c.reason) {
                writeln!(s, "witness factor {} ({reason:?})", f + 1).unwrap();
            }
        }
        if let Some(all) = self.all_kings {
            writeln!(s, "all vertices are {}-kings: {all}", r.k).unwrap();
        }
        s
    }
}

#[derive(Serialize)]
pub struct ClassifyOut {
    pub factors: FactorKingClassification,
    pub outer_three_kings: Vec<usize>,
    pub three_kings: Vec<usize>,
}

impl Report for ClassifyOut {
    fn text(&self) -> String {
        let mut s = String::from("factor  3-kings\n");
        for (i, f) in self.factors.flags.iter().enumerate() {
            let f = match f {
                kk_core::FactorFlag::All3Kings => "ALL",
                kk_core::FactorFlag::No3Kings => "NONE",
            };
            writeln!(s, "{:>6}  {f}", i + 1).unwrap();
        }
        writeln!(s, "\n3-kings: {}", ids(&self.three_kings)).unwrap();
        s
    }
}

#[derive(Serialize)]
pub struct EstablishOut {
    pub check: EstablishCheck,
    pub original_n: usize,
    pub composition: Composition,
    pub three_kings: Vec<usize>,
}

impl Report for EstablishOut {
    fn text(&self) -> String {
        format!(
            "strict 3-kings of T: {}\nadded factors: {}\n3-kings of result: {}\n\n{}",
            ids(&self.check.strict3kings),
            self.check.strict3kings.len(),
            ids(&self.three_kings),
            kk_core::format::write_composition(&self.composition)
        )
    }
}

impl Report for KernelCertificate {
    fn text(&self) -> String {
        cert_line(self) + "\n"
    }
}

#[derive(Serialize)]
pub struct DisjointOut {
    pub singleton_outer_vertices: Vec<usize>,
    pub first: KernelCertificate,
    pub second: KernelCertificate,
}

impl Report for DisjointOut {
    fn text(&self) -> String {
        format!(
            "singleton quasi-kernels of T: {}\nfirst:  {}\nsecond: {}\n",
            ids(&self.singleton_outer_vertices),
            cert_line(&self.first),
            cert_line(&self.second)
        )
    }
}

#[derive(Serialize)]
pub struct KernelOut {
    pub k: usize,
    pub n: usize,
    pub exists: bool,
    pub certificate: Option<KernelCertificate>,
}

impl Report for KernelOut {
    fn text(&self) -> String {
        match &self.certificate {
            Some(c) => cert_line(c) + "\n",
            None => format!("no {}-kernel ({} vertices)\n", self.k, self.n),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum InstanceOut {
    Digraph(kk_core::Digraph),
    Composition(Composition),
}

impl Report for InstanceOut {
    fn text(&self) -> String {
        match self {
            InstanceOut::Digraph(d) => kk_core::format::write_digraph(d),
            InstanceOut::Composition(c) => kk_core::format::write_composition(c),
        }
    }
}

#[derive(Serialize)]
pub struct ValidateOut {
    pub n: usize,
    pub class: DigraphClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<OuterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_valid: Option<bool>,
}

impl Report for ValidateOut {
    fn text(&self) -> String {
        let c = &self.class;
        let mut s = format!(
            "vertices      {}\nsemicomplete  {}\ntournament    {}\nstrong        {}\nsources       {}\nsinks         {}\n",
            self.n,
            c.is_semicomplete,
            c.is_tournament,
            c.is_strong,
            ids(&c.sources),
            ids(&c.sinks)
        );
        if let Some(o) = &self.outer {
            write!(
                s,
                "outer semicomplete  {}\nouter strong        {}\nouter sources       {}\nouter sinks         {}\n",
                o.outer_semicomplete,
                o.outer_strong,
                ids(&o.outer_sources),
                ids(&o.outer_sinks)
            )
            .unwrap();
        }
        if let Some(v) = self.certificate_valid {
            writeln!(s, "certificate valid   {v}").unwrap();
        }
        s
    }
}

impl Report for ExperimentSummary {
    fn text(&self) -> String {
        let mut s = format!(
            "experiment  {}\ninstances   {}\nchecks      {}\nviolations  {}\nelapsed     {:.2}s\n",
            self.experiment,
            self.instances,
            self.checks,
            self.violations,
            self.elapsed.as_secs_f64()
        );
        for (k, v) in &self.counters {
            writeln!(s, "  {k:<26}{v}").unwrap();
        }
        if let Some(v) = &self.first_violation {
            writeln!(s, "first violation at instance {}: {}", v.instance, v.message).unwrap();
        }
        s
    }
}
