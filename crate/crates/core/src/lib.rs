//! Sahlqvist classification and first-order correspondents for
//! distribution-free modal logic over sorted residuated frames.

pub mod correspondence;
pub mod corpus;
pub mod reduction;
pub mod semantics;
pub mod syntax;
pub mod translation;
