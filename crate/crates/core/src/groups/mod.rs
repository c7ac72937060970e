//! Ordered abelian groups presented as lexicographic Hahn sums of subgroups
//! of `Q`, and the decision procedures on them.

pub mod decide;
pub mod definable;
pub mod descriptor;
pub mod element;
pub mod oracle;
pub mod subgroup;

pub use decide::*;
pub use definable::{
    a_violation_witness, defsubgroup_member, defsubgroup_segment, parameter_level, DefinableSet,
};
pub use descriptor::{FinalSegment, GroupDescriptor, Index, Rule};
pub use element::{
    divide_by, first_failure, g_member, g_ops, GroupElement, GroupOp, GroupOpResult, HullElement,
    Val,
};
pub use oracle::{oracle_between, oracle_closed};
pub use subgroup::{PrimeSet, RationalSubgroup};
