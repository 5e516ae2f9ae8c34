#pragma once

#include <random>

#include "icausal/common.hpp"

namespace icausal {

using Rng = std::mt19937_64;

Mat ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Vec random_state(Rng& rng, Eigen::Index d);
// Haar unitary (QR of a Ginibre matrix with the phase fix)
Mat haar_unitary(Rng& rng, Eigen::Index d);
// first `cols` columns of a Haar unitary
Mat haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Mat random_density(Rng& rng, Eigen::Index d);
Mat random_hermitian(Rng& rng, Eigen::Index d);
// Kraus operators d_in -> d_out of a random channel with `rank` terms
std::vector<Mat> random_kraus(Rng& rng, Eigen::Index d_in, Eigen::Index d_out, Eigen::Index rank);
// random instrument: outcomes x Kraus, jointly complete
std::vector<std::vector<Mat>> random_instrument(Rng& rng, Eigen::Index d_in, Eigen::Index d_out,
                                                int outcomes, Eigen::Index rank);
// one Kraus element (1 (x) <0|_E) V of a Haar isometry V: d_in -> d_out (x) env
Mat random_agent_kraus(Rng& rng, Eigen::Index d_in, Eigen::Index d_out, Eigen::Index env = 2);

}  // namespace icausal
