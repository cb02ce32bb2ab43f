//! Graph kernels over plain, dummy-augmented, and edge-to-vertex inputs.
//!
//! Every kernel here is an explicit feature map followed by either a dot
//! product or a histogram intersection, so values are exact integers until
//! the final conversion to `f64`.

mod features;
mod gram;
mod graphlet;
mod sp;
mod wl;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

pub use features::{dot_kernel, FeatureDictionary, FeatureKey, FeatureVector};
pub use gram::{gram_matrix, normalize_gram, GramMatrix, KernelFeatures};
pub use graphlet::{gr_features, gr_kernel, graphlet_counts};
pub use sp::{sp_features, sp_features_many, sp_kernel};
pub use wl::{wl_blocks, wl_features, wl_kernel, wloa_kernel};

use crate::error::{KernelError, TransformError};
use crate::graph::LabeledDigraph;
use crate::transform::{augment_dummy, edge_to_vertex_lossy};

/// Default number of WL refinement rounds.
pub const DEFAULT_WL_ROUNDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKernel {
    /// Weisfeiler-Lehman subtree kernel with `h` refinement rounds.
    Wl { h: usize },
    /// Weisfeiler-Lehman optimal assignment kernel.
    Wloa { h: usize },
    ShortestPath,
    /// Unlabeled size-3 graphlets.
    Graphlet,
}

impl BaseKernel {
    pub fn rounds(self) -> Option<usize> {
        match self {
            BaseKernel::Wl { h } | BaseKernel::Wloa { h } => Some(h),
            _ => None,
        }
    }

    pub fn with_rounds(self, h: usize) -> Self {
        match self {
            BaseKernel::Wl { .. } => BaseKernel::Wl { h },
            BaseKernel::Wloa { .. } => BaseKernel::Wloa { h },
            other => other,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BaseKernel::Wl { .. } => "wl",
            BaseKernel::Wloa { .. } => "wloa",
            BaseKernel::ShortestPath => "sp",
            BaseKernel::Graphlet => "gr",
        }
    }
}

/// Which graph a kernel sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Plain,
    DummyAug,
    EdgeToVertex,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::DummyAug => "dummy",
            Variant::EdgeToVertex => "e2v",
        }
    }
}

impl FromStr for Variant {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" | "g" => Ok(Variant::Plain),
            "dummy" | "gphi" => Ok(Variant::DummyAug),
            "e2v" | "hphi" => Ok(Variant::EdgeToVertex),
            _ => Err(KernelError::Spec(format!("unknown variant `{s}`"))),
        }
    }
}

/// How the two addends of an extended kernel are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AddendScaling {
    /// Normalize each addend's Gram matrix, then sum.
    #[default]
    PerAddend,
    /// Sum raw kernel values.
    RawSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub base: BaseKernel,
    pub variant: Variant,
    /// Add the plain-graph kernel to the variant kernel.
    pub extended: bool,
    pub scaling: AddendScaling,
}

impl KernelSpec {
    pub fn new(base: BaseKernel, variant: Variant, extended: bool) -> Result<Self, KernelError> {
        if extended && variant == Variant::Plain {
            return Err(KernelError::Spec(
                "an extended kernel needs the dummy or e2v variant".into(),
            ));
        }
        Ok(KernelSpec {
            base,
            variant,
            extended,
            scaling: AddendScaling::PerAddend,
        })
    }

    pub fn plain(base: BaseKernel) -> Self {
        KernelSpec {
            base,
            variant: Variant::Plain,
            extended: false,
            scaling: AddendScaling::PerAddend,
        }
    }

    pub fn with_scaling(mut self, scaling: AddendScaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_rounds(mut self, h: usize) -> Self {
        self.base = self.base.with_rounds(h);
        self
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base={}", self.base.name())?;
        if let Some(h) = self.base.rounds() {
            write!(f, " h={h}")?;
        }
        write!(
            f,
            " variant={} extended={} scaling={}",
            self.variant.name(),
            self.extended,
            match self.scaling {
                AddendScaling::PerAddend => "per-addend",
                AddendScaling::RawSum => "raw-sum",
            }
        )
    }
}

impl FromStr for KernelSpec {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| KernelError::Spec(m);
        let mut base = None;
        let mut h = None;
        let mut variant = Variant::Plain;
        let mut extended = false;
        let mut scaling = AddendScaling::PerAddend;
        for field in s.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed field `{field}`")))?;
            match k {
                "base" => base = Some(v.to_string()),
                "h" => h = Some(v.parse::<usize>().map_err(|e| bad(format!("h: {e}")))?),
                "variant" => variant = v.parse()?,
                "extended" => {
                    extended = v.parse().map_err(|e| bad(format!("extended: {e}")))?
                }
                "scaling" => {
                    scaling = match v {
                        "per-addend" => AddendScaling::PerAddend,
                        "raw-sum" => AddendScaling::RawSum,
                        _ => return Err(bad(format!("unknown scaling `{v}`"))),
                    }
                }
                _ => return Err(bad(format!("unknown field `{k}`"))),
            }
        }
        let h = h.unwrap_or(DEFAULT_WL_ROUNDS);
        let base = match base.as_deref() {
            Some("wl") => BaseKernel::Wl { h },
            Some("wloa") => BaseKernel::Wloa { h },
            Some("sp") => BaseKernel::ShortestPath,
            Some("gr") => BaseKernel::Graphlet,
            Some(other) => return Err(bad(format!("unknown base kernel `{other}`"))),
            None => return Err(bad("missing base".into())),
        };
        Ok(KernelSpec::new(base, variant, extended)?.with_scaling(scaling))
    }
}

/// The graph a kernel with `variant` actually compares.
///
/// For the edge-to-vertex variant, isolated vertices are dropped and an
/// edgeless graph maps to the lone dummy, so whole datasets can be processed.
pub fn prepare(g: &LabeledDigraph, variant: Variant) -> Result<Cow<'_, LabeledDigraph>, TransformError> {
    match variant {
        Variant::Plain => Ok(Cow::Borrowed(g)),
        Variant::DummyAug => augment_dummy(g).map(Cow::Owned),
        Variant::EdgeToVertex => edge_to_vertex_lossy(g).map(Cow::Owned),
    }
}

/// Kernel value of `spec.base` on the `spec.variant` images of two graphs.
pub fn base_kernel(spec: &KernelSpec, g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<f64, KernelError> {
    let plain_spec = KernelSpec {
        extended: false,
        ..*spec
    };
    let feats = KernelFeatures::extract(&[g1, g2], &plain_spec)?;
    Ok(feats.gram(spec.base.rounds().unwrap_or(0)).get(0, 1))
}

/// Extended kernel: plain-graph kernel plus variant kernel, each addend
/// normalized first unless `spec.scaling` is [`AddendScaling::RawSum`].
pub fn extended_kernel(spec: &KernelSpec, g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<f64, KernelError> {
    if !spec.extended {
        return Err(KernelError::Spec("extended_kernel needs extended=true".into()));
    }
    let feats = KernelFeatures::extract(&[g1, g2], spec)?;
    Ok(feats.gram(spec.base.rounds().unwrap_or(0)).get(0, 1))
}

/// Dispatches to [`base_kernel`] or [`extended_kernel`].
pub fn kernel(spec: &KernelSpec, g1: &LabeledDigraph, g2: &LabeledDigraph) -> Result<f64, KernelError> {
    if spec.extended {
        extended_kernel(spec, g1, g2)
    } else {
        base_kernel(spec, g1, g2)
    }
}
