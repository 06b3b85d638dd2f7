#include "floodsift/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace floodsift {

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= rows_) throw std::out_of_range("Matrix::select_rows: row index out of range");
        auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

LabelVector select_labels(const LabelVector& y, std::span<const std::size_t> indices) {
    LabelVector out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(y.at(i));
    return out;
}

}  // namespace floodsift
