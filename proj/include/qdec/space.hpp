#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "qdec/linalg.hpp"

namespace qdec {

using Labels = std::vector<std::string>;

struct Subsystem {
    std::string label;
    int dim = 1;
    bool operator==(const Subsystem&) const = default;
};

// Ordered list of named tensor factors; the empty space has dimension 1.
class Space {
public:
    Space() = default;
    Space(std::vector<Subsystem> parts);
    Space(std::initializer_list<Subsystem> parts);

    int dim() const;
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    const std::vector<Subsystem>& parts() const { return parts_; }
    Dims dims() const;
    Labels labels() const;

    bool contains(const std::string& label) const;
    int index_of(const std::string& label) const;
    int dim_of(const std::string& label) const;
    int dim_of(const Labels& labels) const;
    std::vector<int> indices(const Labels& labels) const;

    // Factors named in labels, in the given order.
    Space select(const Labels& labels) const;
    Space without(const Labels& labels) const;
    // Concatenation; label collisions throw.
    Space operator+(const Space& other) const;
    bool operator==(const Space&) const = default;

    std::string describe() const;

private:
    std::vector<Subsystem> parts_;
};

}  // namespace qdec
