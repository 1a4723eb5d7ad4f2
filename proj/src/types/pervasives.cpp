#include "types/pervasives.hpp"

namespace manipos {

const std::vector<PervasiveSig>& pervasiveSigs() {
    static const std::vector<PervasiveSig> sigs = {
        {"+", "int -> int -> int", 2},
        {"-", "int -> int -> int", 2},
        {"*", "int -> int -> int", 2},
        {"/", "int -> int -> int", 2},
        {"mod", "int -> int -> int", 2},
        {"~-", "int -> int", 1},
        {"+.", "float -> float -> float", 2},
        {"-.", "float -> float -> float", 2},
        {"*.", "float -> float -> float", 2},
        {"/.", "float -> float -> float", 2},
        {"**", "float -> float -> float", 2},
        {"~-.", "float -> float", 1},
        {"=", "'a -> 'a -> bool", 2},
        {"<>", "'a -> 'a -> bool", 2},
        {"==", "'a -> 'a -> bool", 2},
        {"!=", "'a -> 'a -> bool", 2},
        {"<", "'a -> 'a -> bool", 2},
        {">", "'a -> 'a -> bool", 2},
        {"<=", "'a -> 'a -> bool", 2},
        {">=", "'a -> 'a -> bool", 2},
        {"&&", "bool -> bool -> bool", 2},
        {"||", "bool -> bool -> bool", 2},
        {"not", "bool -> bool", 1},
        {"^", "string -> string -> string", 2},
        {"@", "'a list -> 'a list -> 'a list", 2},
        {"max", "'a -> 'a -> 'a", 2},
        {"min", "'a -> 'a -> 'a", 2},
        {"abs", "int -> int", 1},
        {"succ", "int -> int", 1},
        {"pred", "int -> int", 1},
        {"fst", "'a * 'b -> 'a", 1},
        {"snd", "'a * 'b -> 'b", 1},
        {"string_of_int", "int -> string", 1},
        {"float_of_int", "int -> float", 1},
        {"int_of_float", "float -> int", 1},
    };
    return sigs;
}

const PervasiveSig* findPervasive(std::string_view name) {
    for (const auto& s : pervasiveSigs())
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace manipos
