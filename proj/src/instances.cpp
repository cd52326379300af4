#include "nilact/instances.hpp"

namespace nilact::instances {

namespace {
IntMat from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.begin()->size());
    IntMat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (std::int64_t v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}
} // namespace

IntMat cat_map() { return from_rows({{2, 1}, {1, 1}}); }

IntMat symplectic4_real() {
    return from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 3, 1}, {0, -1, 1, 4}});
}

IntMat symplectic4_complex() {
    return from_rows({{2, 1, -1, 1}, {0, 1, 0, 1}, {-1, -1, 1, -1}, {-1, 0, 0, 1}});
}

IntMat symplectic6_real() {
    return from_rows({{0, 0, 0, 1, 0, 0},
                      {0, 0, 0, 0, 1, 0},
                      {0, 0, 0, 0, 0, 1},
                      {-1, 0, 0, 3, 1, 0},
                      {0, -1, 0, 1, 4, 1},
                      {0, 0, -1, 0, 1, 6}});
}

IntPoly lehmer_polynomial() {
    return IntPoly({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1});
}

ActionSpec quartic_units_action() {
    IntMat c = from_rows({{0, 0, 0, -1}, {1, 0, 0, 7}, {0, 1, 0, -13}, {0, 0, 1, 7}});
    IntMat c1 = c - IntMat::Identity(4, 4);
    return ActionSpec({c, c1});
}

ActionSpec block_action() {
    IntMat a = block_diag(cat_map(), IntMat::Identity(2, 2));
    IntMat b = block_diag(IntMat::Identity(2, 2), cat_map());
    return ActionSpec({a, b});
}

ActionSpec cat_action() { return ActionSpec({cat_map()}); }

} // namespace nilact::instances
