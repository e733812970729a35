#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace specrw::eval {

/// A nested ground value. Sets and relations keep their elements in canonical
/// sorted order with no duplicates, so equality is structural; functions keep
/// their graph sorted by key. The canonical order is: kind tag first
/// (Int < Tuple < Set < Relation < Function), then contents lexicographically.
struct Value {
    enum class Kind { Int, Tuple, Set, Relation, Function };

    Kind kind = Kind::Int;
    long long num = 0;
    std::vector<Value> elems;                       // Tuple/Set/Relation
    std::vector<std::pair<Value, Value>> mapping;   // Function, sorted by key

    static Value integer(long long v) {
        Value x;
        x.kind = Kind::Int;
        x.num = v;
        return x;
    }
    static Value tuple(std::vector<Value> components) {
        Value x;
        x.kind = Kind::Tuple;
        x.elems = std::move(components);
        return x;
    }
    static Value set(std::vector<Value> elements) {
        Value x;
        x.kind = Kind::Set;
        x.elems = std::move(elements);
        normalize(x.elems);
        return x;
    }
    static Value relation(std::vector<Value> tuples) {
        Value x;
        x.kind = Kind::Relation;
        x.elems = std::move(tuples);
        normalize(x.elems);
        return x;
    }
    static Value function(std::vector<std::pair<Value, Value>> graph) {
        Value x;
        x.kind = Kind::Function;
        x.mapping = std::move(graph);
        std::sort(x.mapping.begin(), x.mapping.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        x.mapping.erase(std::unique(x.mapping.begin(), x.mapping.end(),
                                    [](const auto& a, const auto& b) { return a.first == b.first; }),
                        x.mapping.end());
        return x;
    }

    bool is_true() const { return kind == Kind::Int && num != 0; }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
        case Kind::Int: return a.num == b.num;
        case Kind::Function: return a.mapping == b.mapping;
        default: return a.elems == b.elems;
        }
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

    friend bool operator<(const Value& a, const Value& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        switch (a.kind) {
        case Kind::Int:
            return a.num < b.num;
        case Kind::Function:
            return std::lexicographical_compare(
                a.mapping.begin(), a.mapping.end(), b.mapping.begin(), b.mapping.end(),
                [](const auto& x, const auto& y) {
                    if (x.first != y.first) return x.first < y.first;
                    return x.second < y.second;
                });
        default:
            return std::lexicographical_compare(a.elems.begin(), a.elems.end(), b.elems.begin(),
                                                b.elems.end());
        }
    }

    bool contains(const Value& v) const {
        return std::binary_search(elems.begin(), elems.end(), v);
    }

    const Value* lookup(const Value& key) const {
        auto it = std::lower_bound(mapping.begin(), mapping.end(), key,
                                   [](const auto& p, const Value& k) { return p.first < k; });
        if (it != mapping.end() && it->first == key) return &it->second;
        return nullptr;
    }

private:
    static void normalize(std::vector<Value>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
};

/// Value-literal syntax, as used in .param and .solution files.
inline std::string print_value(const Value& v) {
    std::ostringstream os;
    switch (v.kind) {
    case Value::Kind::Int:
        os << v.num;
        break;
    case Value::Kind::Tuple: {
        os << "(";
        for (std::size_t i = 0; i < v.elems.size(); ++i) {
            if (i) os << ",";
            os << print_value(v.elems[i]);
        }
        os << ")";
        break;
    }
    case Value::Kind::Set: {
        os << "{";
        for (std::size_t i = 0; i < v.elems.size(); ++i) {
            if (i) os << ",";
            os << print_value(v.elems[i]);
        }
        os << "}";
        break;
    }
    case Value::Kind::Relation: {
        os << "relation(";
        for (std::size_t i = 0; i < v.elems.size(); ++i) {
            if (i) os << ",";
            os << print_value(v.elems[i]);
        }
        os << ")";
        break;
    }
    case Value::Kind::Function: {
        os << "function(";
        for (std::size_t i = 0; i < v.mapping.size(); ++i) {
            if (i) os << ", ";
            os << print_value(v.mapping[i].first) << " --> " << print_value(v.mapping[i].second);
        }
        os << ")";
        break;
    }
    }
    return os.str();
}

} // namespace specrw::eval
