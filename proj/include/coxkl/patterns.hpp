#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coxkl/permutation.hpp"

namespace coxkl {

// The four permutation classes used throughout, each cut out by a finite
// list of forbidden patterns:
//   Avoiding321: {321}
//   Smooth:      {4231, 3412}
//   Boolean:     {321, 3412}     (products of distinct simple reflections)
//   Tight:       {321, 46718235, 46781235, 56718234, 56781234}
enum class PatternClass { Avoiding321, Smooth, Boolean, Tight };

const std::vector<Permutation>& forbidden_patterns(PatternClass c);
std::string class_name(PatternClass c);
PatternClass class_from_name(const std::string& name);
const std::vector<PatternClass>& all_pattern_classes();

// True iff some subsequence of w is order-isomorphic to p.
bool contains_pattern(const Permutation& w, const Permutation& p);

bool avoids_all(const Permutation& w, const std::vector<Permutation>& patterns);
bool is_in_class(const Permutation& w, PatternClass c);

std::vector<PatternClass> classify(const Permutation& w);

// #{w in S_n} avoiding c's patterns, by direct enumeration with prefix
// pruning. n <= 10.
uint64_t count_class(int n, PatternClass c, int workers = 1);

}  // namespace coxkl
