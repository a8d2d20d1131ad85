//! Corrosion positions (km) observed along one oil pipeline, in inspection order.
pub const FIELD_RECORDS: [f64; 18] = [
    0.772, 2.731, 3.174, 16.580, 25.540, 25.580, 32.224, 32.709, 34.714, 37.608, 44.324, 44.325,
    45.733, 45.734, 46.500, 50.369, 50.370, 50.545,
];

/// Reference prefix fits: (k, alpha_hat, beta_hat, predicted position k+1).
/// Row k pairs the fit on the first k records with the mean of record k+1.
pub const PREFIX_FITS: [(usize, f64, f64, f64); 16] = [
    (2, 1.5830, 0.4077, 3.4901),
    (3, 1.9180, 0.3274, 3.6631),
    (4, 0.6132, 0.7150, 24.3303),
    (5, 0.6059, 0.702, 35.0046),
    (6, 0.7264, 0.5694, 31.7865),
    (7, 0.7258, 0.5630, 38.8842),
    (8, 0.8205, 0.4573, 37.8170),
    (9, 0.8801, 0.3966, 39.1573),
    (10, 0.9136, 0.3638, 41.7606),
    (11, 0.8738, 0.4005, 48.9922),
    (12, 0.9532, 0.3233, 48.2150),
    (13, 1.0027, 0.2813, 49.2410),
    (14, 1.07982, 0.2256, 48.7444),
    (15, 1.1366, 0.1910, 49.2071),
    (16, 1.1114, 0.2053, 53.1849),
    (17, 1.1808, 0.1661, 52.8580),
];
