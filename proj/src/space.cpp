#include "qdec/space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qdec {

Space::Space(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
    std::set<std::string> seen;
    for (const auto& p : parts_) {
        if (p.dim < 1) throw std::invalid_argument("space: dimension of '" + p.label + "' must be positive");
        if (p.label.empty()) throw std::invalid_argument("space: empty label");
        if (!seen.insert(p.label).second) throw std::invalid_argument("space: duplicate label '" + p.label + "'");
    }
}

Space::Space(std::initializer_list<Subsystem> parts) : Space(std::vector<Subsystem>(parts)) {}

int Space::dim() const {
    int d = 1;
    for (const auto& p : parts_) d *= p.dim;
    return d;
}

Dims Space::dims() const {
    Dims d;
    for (const auto& p : parts_) d.push_back(p.dim);
    return d;
}

Labels Space::labels() const {
    Labels l;
    for (const auto& p : parts_) l.push_back(p.label);
    return l;
}

bool Space::contains(const std::string& label) const {
    return std::any_of(parts_.begin(), parts_.end(), [&](const Subsystem& p) { return p.label == label; });
}

int Space::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
        if (parts_[i].label == label) return static_cast<int>(i);
    throw std::invalid_argument("space: unknown label '" + label + "' in " + describe());
}

int Space::dim_of(const std::string& label) const { return parts_[index_of(label)].dim; }

int Space::dim_of(const Labels& labels) const {
    int d = 1;
    for (const auto& l : labels) d *= dim_of(l);
    return d;
}

std::vector<int> Space::indices(const Labels& labels) const {
    std::vector<int> idx;
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) throw std::invalid_argument("space: label '" + l + "' repeated");
        idx.push_back(index_of(l));
    }
    return idx;
}

Space Space::select(const Labels& labels) const {
    std::vector<Subsystem> out;
    for (int i : indices(labels)) out.push_back(parts_[i]);
    return Space(out);
}

Space Space::without(const Labels& labels) const {
    for (const auto& l : labels) index_of(l);
    std::vector<Subsystem> out;
    for (const auto& p : parts_)
        if (std::find(labels.begin(), labels.end(), p.label) == labels.end()) out.push_back(p);
    return Space(out);
}

Space Space::operator+(const Space& other) const {
    std::vector<Subsystem> out = parts_;
    out.insert(out.end(), other.parts_.begin(), other.parts_.end());
    return Space(out);
}

std::string Space::describe() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += parts_[i].label + ":" + std::to_string(parts_[i].dim);
    }
    return s + "]";
}

}  // namespace qdec
