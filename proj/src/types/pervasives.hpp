#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace manipos {

/// A built-in function available in every program.
struct PervasiveSig {
    std::string name;
    std::string type;  // surface syntax, e.g. "'a -> 'a -> bool"
    int arity;
};

const std::vector<PervasiveSig>& pervasiveSigs();
const PervasiveSig* findPervasive(std::string_view name);

}  // namespace manipos
