// Walkthrough: build the product model on Z_2 x Z_3 x Z_5, tabulate the
// exact multiplicity profile of every power of the rotation, and confirm
// the multiplier conjugation R^7 ~ R.

#include <iostream>

#include "speclab/speclab.hpp"

int main() {
  using namespace speclab;

  ProductModel model(PrimeSpec::with_unit_exponents({2, 3, 5}), 3, "P235");
  auto [group, rotation] = model.truncate(3);
  std::cout << "rotation on a group of order " << group.order() << "\n\n";
  std::cout << "  n   mm   cardm  homogeneous\n";
  for (Int n = 1; n <= 12; ++n) {
    MultiplicityProfile profile = oracle_profile(power(rotation, n).as_permutation());
    std::cout << "  " << n << "    " << profile.mm() << "    " << profile.cardm() << "      "
              << (profile.homogeneous() ? "yes" : "no") << "\n";
  }

  Permutation r = rotation.as_permutation();
  Permutation psi = multiplier_for(model, 7, 3).as_permutation();
  bool conjugate = compose(psi.inverse(), compose(r, psi)) == perm_power(r, 7);
  std::cout << "\nPsi_7^-1 R Psi_7 == R^7: " << (conjugate ? "verified" : "FAILED") << "\n";

  auto points = ratio_scan(model.spec(), 100);
  std::cout << "distinct values of hm(R^n)/n for n <= 100: " << points.size() << "\n";
  return conjugate ? 0 : 1;
}
