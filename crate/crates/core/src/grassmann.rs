//! Sign bookkeeping for exterior monomials encoded as bit masks.
//!
//! Bit `i` of a mask stands for the generator with index `i`; a mask is the
//! product of its generators in increasing order.

/// Sign and support of `x_A * x_B`, or `None` when the supports overlap.
pub fn merge(a: u32, b: u32) -> Option<(u32, i32)> {
    if a & b != 0 {
        return None;
    }
    Some((a | b, merge_sign(a, b)))
}

/// `(-1)^{#{(i, j) : i in a, j in b, i > j}}`, ignoring overlap.
pub fn merge_sign(a: u32, b: u32) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of a strictly above j
        let above = if j >= 31 { 0 } else { a & !((1u32 << (j + 1)) - 1) };
        inversions += above.count_ones();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Left derivative `∂/∂x_i` applied to `x_A`.
pub fn left_derivative(i: usize, a: u32) -> Option<(u32, i32)> {
    let bit = 1u32 << i;
    if a & bit == 0 {
        return None;
    }
    let below = (a & (bit - 1)).count_ones();
    Some((a & !bit, if below.is_multiple_of(2) { 1 } else { -1 }))
}

/// Right derivative `x_A ∂/∂x_i`.
pub fn right_derivative(i: usize, a: u32) -> Option<(u32, i32)> {
    let bit = 1u32 << i;
    if a & bit == 0 {
        return None;
    }
    let above = (a & !(bit | (bit - 1))).count_ones();
    Some((a & !bit, if above.is_multiple_of(2) { 1 } else { -1 }))
}

/// Mask of a list of indices together with the sign of the sorting
/// permutation, or `None` on a repeated index.
pub fn mask_of(indices: &[usize]) -> Option<(u32, i32)> {
    let mut mask = 0u32;
    let mut sign = 1;
    for &i in indices {
        let bit = 1u32 << i;
        if mask & bit != 0 {
            return None;
        }
        // moving x_i left past every larger generator already present
        if (mask & !(bit | (bit - 1))).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((mask, sign))
}

/// Indices of a mask in increasing order.
pub fn indices(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

/// Sign of the permutation sorting `perm` (a permutation of distinct values).
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_signs() {
        // x1 * x0 = -x0 x1
        assert_eq!(merge(0b10, 0b01), Some((0b11, -1)));
        assert_eq!(merge(0b01, 0b10), Some((0b11, 1)));
        assert_eq!(merge(0b01, 0b01), None);
        // x0 x2 * x1 = -x0 x1 x2
        assert_eq!(merge(0b101, 0b010), Some((0b111, -1)));
    }

    #[test]
    fn derivatives() {
        // ∂_1 (x0 x1 x2) = -x0 x2 ; (x0 x1 x2) ∂_1 = -x0 x2
        assert_eq!(left_derivative(1, 0b111), Some((0b101, -1)));
        assert_eq!(right_derivative(1, 0b111), Some((0b101, -1)));
        assert_eq!(left_derivative(0, 0b111), Some((0b110, 1)));
        assert_eq!(right_derivative(0, 0b111), Some((0b110, 1)));
        assert_eq!(left_derivative(3, 0b111), None);
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(mask_of(&[1, 0]), Some((0b11, -1)));
        assert_eq!(mask_of(&[2, 0, 1]), Some((0b111, 1)));
        assert_eq!(mask_of(&[0, 0]), None);
        for perm in [[0usize, 1, 2], [2, 1, 0], [1, 2, 0], [0, 2, 1]] {
            assert_eq!(mask_of(&perm).unwrap().1, permutation_sign(&perm));
        }
        assert_eq!(indices(0b1011), vec![0, 1, 3]);
    }
}
