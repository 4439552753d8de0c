#pragma once

#include <string>
#include <vector>

namespace benj::bounds {

// one measured inequality: `value` is the max of LHS/RHS over the corpus or
// sample grid, `detail` names the argmax. regression-style: the suite
// measures ratios and freezes them, it never claims universal constants
struct CheckResult {
    std::string name;
    double value;
    std::string detail;
};

struct SuiteConfig {
    // 0 = base resolution; 1 doubles the grid size and the pointwise
    // quadrature resolution (for stability-under-refinement checks)
    int refine = 0;
};

// the full inequality battery over the documented pulse corpus
// (gaussian, gaussian-derivative, sech, compact bump):
//   jota:          || J^{b*d} (<x>^{(1-b)v} f) ||  vs  ||<x>^v f||^{1-b} ||J^d f||^b
//   boundhilbert:  || w^v H f ||                  vs  || w^v f ||,  w = |x| or <x>_N
//   intj1:         || J^{2h} (x^j f^(k)) ||       vs  ||J^{2(h+j)+k} f|| + ||<x>^{h+j+k/2} f||
//   intj2:         || |x|^h (x^j f)^(k) ||        vs  ||J^{2(4+h)} f|| + ||<x>^{2(4+h)(j+h)/(2(4+h)-k)} f||
//   pontual:       stein derivative of e^{-itx|x|} vs  t^{b/2} + t^b |x|^b
//   lemma_p:       stein derivative of e^{itx^3}   vs  t^{b/3} + t^{1/3+2b/9} + (t^{1/3+2b/3}+t^{2b/3})|x|^{2b}
//   df:            || D^h_xi ( mu(.,t) fhat ) ||   vs  ||J^{2h} f|| + || |x|^h f ||, plus monotonicity in t
// deterministic: fixed evaluation order, no threading
std::vector<CheckResult> bound_check_suite(const SuiteConfig& cfg = {});

} // namespace benj::bounds
