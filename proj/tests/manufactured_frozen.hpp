#pragma once
// GENERATED by tools/generate_manufactured.py -- do not edit by hand.
//
// Point samples of the manufactured fields and sources, evaluated in exact
// arithmetic and rounded once.  Material values used for the force/traction
// columns: rho_f = mu_f = 1, rho_s = 1, mu_s = 1/2, lam_s = 5.
// Columns: x, y, t, u0, u1, p, eta0, eta1, ff0, ff1, fs0, fs1, g0, g1.

namespace fsihdg::test {

inline constexpr double kManufacturedSamples[4][14] = {
  {1.30000000000000000000e-1, -3.70000000000000000000e-1, 2.00000000000000000000e-1, -1.74721050909801974950e-1, -1.35300657216572937654e-1, -1.05571940645112063010e-1, -1.77088552170192655200e-2, -1.37134005143591120366e-2, -1.53421006383651801332e+1, -1.16669722256058858066e+1, -1.53055500313113899062e+0, -1.16728279146979220803e+0, -4.94719158643588668590e-1, -4.01525232310009316108e+0},
  {7.10000000000000000000e-1, -8.30000000000000000000e-1, 3.00000000000000000000e-1, 5.24038549438161372081e-1, -1.74210965420580896255e-1, -2.50830427685317610810e-1, 8.10520597670339855199e-2, -2.69448833420371269092e-2, 7.65550962221688956873e+1, -2.67943133878140818802e+1, 7.36510652352319799931e+0, -2.47501094063381851799e+0, 4.40681742510720627241e+0, -2.73138904073145416801e+0},
  {2.90000000000000000000e-1, 2.20000000000000000000e-1, 2.50000000000000000000e-1, -3.21351713944026927499e-1, 2.94422076295525139929e-1, 2.35386779637843047495e-1, -4.10272820130703526141e-2, 3.75891493055929547271e-2, -4.78101342225594572753e+1, 5.63594378042008965419e+1, -4.12910297233019780997e+0, 4.58878737466839488371e+0, 3.79647346706449679064e+0, 2.35309181684908301958e+0},
  {5.70000000000000000000e-1, 3.60000000000000000000e-1, 1.50000000000000000000e-1, -4.93881442246647514098e-2, -1.04598051362663055846e-1, -4.90259563145636633866e-2, -3.73214397344461678377e-3, -7.90422465058441443112e-3, 9.27089973606446943583e+0, -1.22942333795370271900e+1, 6.77718864774044473760e-2, -1.12487335863577550564e+0, -2.77835414261371569678e+0, -2.38440732467015949888e+0},
};

}  // namespace fsihdg::test
