use desksnark::algebra::AlgebraError;
use desksnark::snark::SnarkError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DapError {
    #[error("hash input is empty")]
    EmptyHashInput,
    #[error("no small exponent gives a permutation of this field")]
    NoPermutationExponent,
    #[error("value {0} exceeds the maximum coin value")]
    ValueOutOfRange(String),
    #[error("merkle tree is full ({0} leaves)")]
    TreeFull(usize),
    #[error("leaf index {0} is out of range")]
    BadLeafIndex(usize),
    #[error("coin commitment is not in the tree")]
    CoinNotInTree,
    #[error("coin is already spent")]
    CoinAlreadySpent,
    #[error("both inputs are the same coin")]
    DuplicateCoin,
    #[error("address does not own the coin")]
    WrongOwner,
    #[error("depth must be between 1 and 20")]
    BadDepth,
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Snark(#[from] SnarkError),
}
