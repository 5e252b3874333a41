use num_traits::Float;

/// Pairwise (tree) summation with a fixed split, so totals do not depend on
/// thread scheduling.
pub fn pairwise_sum<T: Float>(v: &[T]) -> T {
    if v.len() <= 16 {
        return v.iter().fold(T::zero(), |a, b| a + *b);
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
