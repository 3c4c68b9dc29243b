#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Direct solver for block matrices with small bandwidth (block pentadiagonal
/// plus a few wider edge rows from biased boundary stencils). Block Gaussian
/// elimination without inter-block pivoting; diagonal blocks are factored
/// with partial pivoting.
class BlockBandedMatrix {
public:
    BlockBandedMatrix(int num_block_rows, int block_size)
        : m_(num_block_rows), bs_(block_size), rows_(num_block_rows) {}

    int block_rows() const { return m_; }
    int block_size() const { return bs_; }

    /// Accumulate into block (row, col); creates the block when absent.
    Eigen::MatrixXd& block(int row, int col) {
        auto it = rows_[row].find(col);
        if (it == rows_[row].end())
            it = rows_[row].emplace(col, Eigen::MatrixXd::Zero(bs_, bs_)).first;
        return it->second;
    }

    bool has_block(int row, int col) const { return rows_[row].count(col) != 0; }

    /// Solve in place; rhs is a flat vector of length m * bs. The factorization
    /// destroys the stored blocks.
    Eigen::VectorXd solve(Eigen::VectorXd rhs) {
        if (rhs.size() != Eigen::Index(m_) * bs_) throw ConfigError("BlockBandedMatrix: rhs size");
        std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> diag_lu(m_);
        auto seg = [&](Eigen::VectorXd& v, int k) { return v.segment(Eigen::Index(k) * bs_, bs_); };

        for (int k = 0; k < m_; ++k) {
            auto dit = rows_[k].find(k);
            if (dit == rows_[k].end()) throw ConfigError("BlockBandedMatrix: missing diagonal block");
            diag_lu[k].compute(dit->second);
            const Eigen::MatrixXd inv = diag_lu[k].inverse();
            // eliminate column k from all later rows that carry it
            for (int r = k + 1; r < m_; ++r) {
                auto it = rows_[r].find(k);
                if (it == rows_[r].end()) continue;
                const Eigen::MatrixXd mult = it->second * inv;
                for (const auto& [c, blk] : rows_[k]) {
                    if (c <= k) continue;
                    block(r, c).noalias() -= mult * blk;
                }
                seg(rhs, r).noalias() -= mult * seg(rhs, k);
                rows_[r].erase(it);
            }
        }
        for (int k = m_ - 1; k >= 0; --k) {
            Eigen::VectorXd acc = seg(rhs, k);
            for (const auto& [c, blk] : rows_[k]) {
                if (c <= k) continue;
                acc.noalias() -= blk * rhs.segment(Eigen::Index(c) * bs_, bs_);
            }
            seg(rhs, k) = diag_lu[k].solve(acc);
        }
        return rhs;
    }

private:
    int m_, bs_;
    std::vector<std::map<int, Eigen::MatrixXd>> rows_;
};

} // namespace minsurf
