//! ONO domain types: cancer codes, gene records, features.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rdf::{Iri, Term};

use super::RecordError;

/// The 33 TCGA study codes with their study names.
pub const TCGA_CODES: [(&str, &str); 33] = [
    ("ACC", "Adrenocortical carcinoma"),
    ("BLCA", "Bladder urothelial carcinoma"),
    ("BRCA", "Breast invasive carcinoma"),
    ("CESC", "Cervical squamous cell carcinoma and endocervical adenocarcinoma"),
    ("CHOL", "Cholangiocarcinoma"),
    ("COAD", "Colon adenocarcinoma"),
    ("DLBC", "Lymphoid neoplasm diffuse large B-cell lymphoma"),
    ("ESCA", "Esophageal carcinoma"),
    ("GBM", "Glioblastoma multiforme"),
    ("HNSC", "Head and neck squamous cell carcinoma"),
    ("KICH", "Kidney chromophobe"),
    ("KIRC", "Kidney renal clear cell carcinoma"),
    ("KIRP", "Kidney renal papillary cell carcinoma"),
    ("LAML", "Acute myeloid leukemia"),
    ("LGG", "Brain lower grade glioma"),
    ("LIHC", "Liver hepatocellular carcinoma"),
    ("LUAD", "Lung adenocarcinoma"),
    ("LUSC", "Lung squamous cell carcinoma"),
    ("MESO", "Mesothelioma"),
    ("OV", "Ovarian serous cystadenocarcinoma"),
    ("PAAD", "Pancreatic adenocarcinoma"),
    ("PCPG", "Pheochromocytoma and paraganglioma"),
    ("PRAD", "Prostate adenocarcinoma"),
    ("READ", "Rectum adenocarcinoma"),
    ("SARC", "Sarcoma"),
    ("SKCM", "Skin cutaneous melanoma"),
    ("STAD", "Stomach adenocarcinoma"),
    ("TGCT", "Testicular germ cell tumors"),
    ("THCA", "Thyroid carcinoma"),
    ("THYM", "Thymoma"),
    ("UCEC", "Uterine corpus endometrial carcinoma"),
    ("UCS", "Uterine carcinosarcoma"),
    ("UVM", "Uveal melanoma"),
];

/// Codes admitted beyond the TCGA list. Each is flagged `nonTcga` in the seed.
pub const EXTENSION_CODES: [(&str, &str); 1] = [("MED", "Medulloblastoma")];

/// A cancer type code from the closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CancerCode(String);

impl CancerCode {
    pub fn parse(code: &str) -> Option<Self> {
        TCGA_CODES
            .iter()
            .chain(EXTENSION_CODES.iter())
            .find(|(c, _)| *c == code)
            .map(|(c, _)| CancerCode((*c).to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_tcga(&self) -> bool {
        TCGA_CODES.iter().any(|(c, _)| *c == self.0)
    }

    pub fn iri(&self) -> Iri {
        Iri::ono(&self.0)
    }

    /// Study name for the code.
    pub fn label(&self) -> &'static str {
        TCGA_CODES
            .iter()
            .chain(EXTENSION_CODES.iter())
            .find(|(c, _)| *c == self.0)
            .map(|(_, l)| *l)
            .expect("constructed from the closed list")
    }
}

impl fmt::Display for CancerCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancerType {
    pub code: CancerCode,
    pub label: String,
    pub external_refs: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Significance {
    High,
    Medium,
    Low,
}

impl Significance {
    pub const ALL: [Significance; 3] = [Significance::High, Significance::Medium, Significance::Low];

    pub fn local_name(self) -> &'static str {
        match self {
            Significance::High => "HIGH",
            Significance::Medium => "MEDIUM",
            Significance::Low => "LOW",
        }
    }

    pub fn iri(self) -> Iri {
        Iri::ono(self.local_name())
    }

    pub fn from_iri(iri: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.iri() == *iri)
    }

    /// Maps mutation-significance prose onto levels: "highly significantly"
    /// is HIGH, "nearly significantly" is LOW, plain "significantly" is
    /// MEDIUM.
    pub fn from_phrase(phrase: &str) -> Option<Self> {
        let p = phrase.to_lowercase();
        if p.contains("highly significant") {
            Some(Significance::High)
        } else if p.contains("nearly significant") {
            Some(Significance::Low)
        } else if p.contains("significant") {
            Some(Significance::Medium)
        } else {
            None
        }
    }
}

/// Gene (biomarker) type. `POTFS` is accepted as an input spelling of POTSF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneType {
    Potsf,
    Oncogene,
    ProteinCoding,
}

impl GeneType {
    pub fn local_name(self) -> &'static str {
        match self {
            GeneType::Potsf => "POTSF",
            GeneType::Oncogene => "Oncogene",
            GeneType::ProteinCoding => "ProteinCoding",
        }
    }

    pub fn iri(self) -> Iri {
        Iri::ono(self.local_name())
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "POTSF" | "POTFS" => Some(GeneType::Potsf),
            "Oncogene" | "oncogene" => Some(GeneType::Oncogene),
            "ProteinCoding" | "Protein-coding" | "protein-coding" => Some(GeneType::ProteinCoding),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvidenceSource {
    PubMed,
    MeSH,
    CancerIndex,
}

impl EvidenceSource {
    pub const ALL: [EvidenceSource; 3] = [EvidenceSource::PubMed, EvidenceSource::MeSH, EvidenceSource::CancerIndex];

    pub fn local_name(self) -> &'static str {
        match self {
            EvidenceSource::PubMed => "PubMed",
            EvidenceSource::MeSH => "MeSH",
            EvidenceSource::CancerIndex => "CancerIndex",
        }
    }

    pub fn iri(self) -> Iri {
        Iri::ono(self.local_name())
    }

    pub fn from_iri(iri: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.iri() == *iri)
    }
}

/// One biomarker gene with its cancer linkage.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneRecord {
    pub symbol: String,
    pub gene_type: BTreeSet<GeneType>,
    pub cross_responsibility: BTreeSet<CancerCode>,
    pub significance: BTreeMap<CancerCode, Significance>,
    pub evidence_type: BTreeSet<EvidenceSource>,
    pub citations: i64,
    pub external_refs: BTreeSet<Iri>,
}

impl GeneRecord {
    pub fn iri(&self) -> Iri {
        Iri::ono(&self.symbol)
    }

    /// Checks the record invariants, returning every violation found.
    pub fn validate(&self) -> Vec<RecordError> {
        let subject = || Iri::new(crate::rdf::vocab::ono(&self.symbol)).ok();
        let mut errors = Vec::new();
        if !is_valid_symbol(&self.symbol) {
            errors.push(RecordError::new(None, format!("invalid gene symbol {:?}", self.symbol)));
            return errors;
        }
        if self.gene_type.is_empty() {
            errors.push(RecordError::new(subject(), "geneType is empty"));
        }
        if self.evidence_type.is_empty() {
            errors.push(RecordError::new(subject(), "no evidenceType"));
        }
        if self.citations < 1 {
            errors.push(RecordError::new(
                subject(),
                format!("hasCitations = {} (at least 1 article required)", self.citations),
            ));
        }
        for code in self.significance.keys() {
            if !self.cross_responsibility.contains(code) {
                errors.push(RecordError::new(
                    subject(),
                    format!("significance for {code} without crossResponsibility"),
                ));
            }
        }
        errors
    }

    /// Type carried by the Feature nodes: POTSF over Oncogene over
    /// ProteinCoding.
    pub fn primary_type(&self) -> Option<GeneType> {
        self.gene_type.iter().next().copied()
    }
}

pub(crate) fn is_valid_symbol(symbol: &str) -> bool {
    !symbol.is_empty()
        && symbol.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
        && symbol.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

/// Reified gene–cancer link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub gene: Iri,
    pub cancer: Iri,
    pub significance: Significance,
    pub biomarker_type: GeneType,
    pub evidence: BTreeSet<EvidenceSource>,
}

impl Feature {
    pub fn iri(&self) -> Iri {
        feature_iri(self.gene.local_name(), self.cancer.local_name())
    }
}

/// `ono:feature/<SYMBOL>_<CODE>`.
pub fn feature_iri(symbol: &str, code: &str) -> Iri {
    Iri::ono(&format!("feature/{symbol}_{code}"))
}

pub(crate) fn code_of(term: &Term) -> Option<CancerCode> {
    let iri = term.as_iri()?;
    iri.as_str()
        .strip_prefix(crate::rdf::vocab::ONO)
        .and_then(CancerCode::parse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_code_list() {
        assert_eq!(TCGA_CODES.len(), 33);
        assert!(CancerCode::parse("BRCA").unwrap().is_tcga());
        let med = CancerCode::parse("MED").unwrap();
        assert!(!med.is_tcga());
        assert!(CancerCode::parse("brca").is_none());
        assert!(CancerCode::parse("XYZ").is_none());
    }

    #[test]
    fn significance_phrases() {
        assert_eq!(Significance::from_phrase("highly significantly mutated"), Some(Significance::High));
        assert_eq!(Significance::from_phrase("significantly mutated"), Some(Significance::Medium));
        assert_eq!(Significance::from_phrase("nearly significantly mutated"), Some(Significance::Low));
        assert_eq!(Significance::from_phrase("mutated"), None);
    }

    #[test]
    fn potfs_spelling_is_an_alias() {
        assert_eq!(GeneType::parse("POTFS"), Some(GeneType::Potsf));
        assert_eq!(GeneType::Potsf.local_name(), "POTSF");
    }

    #[test]
    fn zero_citations_invalid() {
        let rec = GeneRecord {
            symbol: "X1".into(),
            gene_type: [GeneType::Oncogene].into(),
            evidence_type: [EvidenceSource::PubMed].into(),
            citations: 0,
            ..Default::default()
        };
        let errs = rec.validate();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].reason.contains("hasCitations"));
    }

    #[test]
    fn significance_requires_responsibility() {
        let brca = CancerCode::parse("BRCA").unwrap();
        let rec = GeneRecord {
            symbol: "X1".into(),
            gene_type: [GeneType::Oncogene].into(),
            evidence_type: [EvidenceSource::PubMed].into(),
            citations: 3,
            significance: [(brca, Significance::High)].into(),
            ..Default::default()
        };
        assert_eq!(rec.validate().len(), 1);
    }
}
