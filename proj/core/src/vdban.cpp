// Copyright 2026 The beamlab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beamlab/vdban.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace beamlab {

void VdbanConfig::validate() const {
  if (grid_cells < 1) throw std::invalid_argument("vdban.grid_cells: must be >= 1");
  if (num_classes < 1) throw std::invalid_argument("vdban.num_classes: must be >= 1");
  if (model_dim < 1 || conv_filters < 1 || heads < 1 || ffn_hidden < 1) {
    throw std::invalid_argument("vdban: layer sizes must be >= 1");
  }
  if (block_dims.empty()) throw std::invalid_argument("vdban.block_dims: empty");
  for (int d : block_dims) {
    if (d < 1) throw std::invalid_argument("vdban.block_dims: entries must be >= 1");
  }
  for (int n : head_hidden) {
    if (n < 1) throw std::invalid_argument("vdban.head_hidden: entries must be >= 1");
  }
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat relu(const Mat& x) { return x.cwiseMax(0.0); }

Mat relu_mask(const Mat& pre, const Mat& grad) {
  return (pre.array() > 0.0).select(grad, 0.0);
}

Vec row_dot(const Mat& a, const Mat& b) { return a.cwiseProduct(b).rowwise().sum(); }

Mat scale_rows(const Mat& m, const Vec& s) { return m.array().colwise() * s.array(); }

Mat affine(const Mat& x, const Mat& w, const Mat& b) {
  return (x * w).rowwise() + b.row(0);
}

}  // namespace

struct VdbanModel::Cache {
  struct Head {
    Mat qu, qf, ku, kf, vu, vf;
    Vec auu, auf, afu, aff;
  };
  struct Block {
    Mat u_in, f_in;
    std::vector<Head> heads;
    Mat cu, cf;    // concatenated head outputs
    Mat r;         // residual after attention, u rows stacked over f rows
    Mat hid_pre;   // feed-forward hidden pre-activation
  };
  Mat x;         // scaled VDF
  Mat conv;      // conv output, N x (G F)
  Mat f_pre;
  Mat loc;       // scaled location
  Mat u_pre;
  std::vector<Block> blocks;
  std::vector<Mat> mlp_in;   // input of each MLP layer
  std::vector<Mat> mlp_pre;  // pre-activation of each hidden layer
};

int VdbanModel::add(const std::string& name, int rows, int cols) {
  params_.push_back({name, Mat::Zero(rows, cols), Mat::Zero(rows, cols)});
  return static_cast<int>(params_.size()) - 1;
}

VdbanModel::VdbanModel(const VdbanConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  const int d_model = cfg_.model_dim;
  const int gf = cfg_.grid_cells * cfg_.conv_filters;
  conv_w_ = add("conv.w", cfg_.conv_filters, 4);
  conv_b_ = add("conv.b", 1, cfg_.conv_filters);
  vdf_w_ = add("vdf_fc.w", gf, d_model);
  vdf_b_ = add("vdf_fc.b", 1, d_model);
  loc_w_ = add("loc_fc.w", 2, d_model);
  loc_b_ = add("loc_fc.b", 1, d_model);
  for (std::size_t b = 0; b < cfg_.block_dims.size(); ++b) {
    const int d = cfg_.block_dims[b];
    const std::string pre = "block" + std::to_string(b) + ".";
    BlockIndex bi;
    for (int h = 0; h < cfg_.heads; ++h) {
      const std::string hp = pre + "head" + std::to_string(h) + ".";
      bi.heads.push_back({add(hp + "wq", d_model, d), add(hp + "wk", d_model, d),
                          add(hp + "wv", d_model, d)});
    }
    bi.wo = add(pre + "wo", d * cfg_.heads, d_model);
    bi.f1w = add(pre + "ffn1.w", d_model, cfg_.ffn_hidden);
    bi.f1b = add(pre + "ffn1.b", 1, cfg_.ffn_hidden);
    bi.f2w = add(pre + "ffn2.w", cfg_.ffn_hidden, d_model);
    bi.f2b = add(pre + "ffn2.b", 1, d_model);
    blocks_.push_back(bi);
  }
  int width = d_model;
  for (std::size_t i = 0; i < cfg_.head_hidden.size(); ++i) {
    const std::string pre = "mlp" + std::to_string(i) + ".";
    mlp_w_.push_back(add(pre + "w", width, cfg_.head_hidden[i]));
    mlp_b_.push_back(add(pre + "b", 1, cfg_.head_hidden[i]));
    width = cfg_.head_hidden[i];
  }
  mlp_w_.push_back(add("out.w", width, cfg_.num_classes));
  mlp_b_.push_back(add("out.b", 1, cfg_.num_classes));

  std::mt19937_64 rng(seed);
  for (auto& p : params_) {
    // Biases start at zero; every weight matrix maps rows -> cols.
    if (p.name.ends_with(".b")) continue;
    glorot_init(p.value, static_cast<int>(p.value.rows()), static_cast<int>(p.value.cols()), rng);
  }
}

void VdbanModel::check_inputs(const Mat& vdf, const Mat& loc) const {
  if (params_.empty()) throw std::logic_error("VdbanModel: not initialized");
  if (vdf.cols() != 4 * cfg_.grid_cells) {
    throw std::invalid_argument("VdbanModel: VDF width does not match G x 4");
  }
  if (loc.cols() != 2 || loc.rows() != vdf.rows()) {
    throw std::invalid_argument("VdbanModel: location batch must be N x 2");
  }
}

Mat VdbanModel::run(const Mat& vdf, const Mat& loc, Cache* cache) const {
  check_inputs(vdf, loc);
  const Eigen::Index n = vdf.rows();
  const int gcells = cfg_.grid_cells;
  const int nf = cfg_.conv_filters;

  Mat x = vdf;
  for (int gi = 0; gi < gcells; ++gi) x.col(4 * gi + 3) *= cfg_.azimuth_scale;
  Mat conv(n, static_cast<Eigen::Index>(gcells) * nf);
  const Mat wt = w(conv_w_).transpose();  // 4 x F
  for (int gi = 0; gi < gcells; ++gi) {
    conv.middleCols(gi * nf, nf) = affine(x.middleCols(4 * gi, 4), wt, w(conv_b_));
  }
  const Mat f_pre = affine(conv, w(vdf_w_), w(vdf_b_));
  const Mat l = loc * cfg_.location_scale;
  const Mat u_pre = affine(l, w(loc_w_), w(loc_b_));
  Mat u = relu(u_pre);
  Mat f = relu(f_pre);
  if (cache) {
    cache->x = x;
    cache->conv = conv;
    cache->f_pre = f_pre;
    cache->loc = l;
    cache->u_pre = u_pre;
    cache->blocks.clear();
  }

  for (const auto& bi : blocks_) {
    const Eigen::Index d = w(bi.heads[0].wq).cols();
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    const int h = static_cast<int>(bi.heads.size());
    Mat cu(n, d * h), cf(n, d * h);
    Cache::Block cb;
    for (int hi = 0; hi < h; ++hi) {
      const auto& hw = bi.heads[hi];
      Cache::Head ch;
      ch.qu = u * w(hw.wq);
      ch.qf = f * w(hw.wq);
      ch.ku = u * w(hw.wk);
      ch.kf = f * w(hw.wk);
      ch.vu = u * w(hw.wv);
      ch.vf = f * w(hw.wv);
      const Vec suu = c * row_dot(ch.qu, ch.ku);
      const Vec suf = c * row_dot(ch.qu, ch.kf);
      const Vec sfu = c * row_dot(ch.qf, ch.ku);
      const Vec sff = c * row_dot(ch.qf, ch.kf);
      // Two-way softmax per row, shifted by the row maximum.
      const auto softmax2 = [](const Vec& a, const Vec& b, Vec& pa, Vec& pb) {
        const Vec m = a.cwiseMax(b);
        const Vec ea = (a - m).array().exp();
        const Vec eb = (b - m).array().exp();
        const Vec z = ea + eb;
        pa = ea.cwiseQuotient(z);
        pb = eb.cwiseQuotient(z);
      };
      softmax2(suu, suf, ch.auu, ch.auf);
      softmax2(sfu, sff, ch.afu, ch.aff);
      cu.middleCols(hi * d, d) = scale_rows(ch.vu, ch.auu) + scale_rows(ch.vf, ch.auf);
      cf.middleCols(hi * d, d) = scale_rows(ch.vu, ch.afu) + scale_rows(ch.vf, ch.aff);
      if (cache) cb.heads.push_back(std::move(ch));
    }
    Mat r(2 * n, cfg_.model_dim);
    r.topRows(n) = u + cu * w(bi.wo);
    r.bottomRows(n) = f + cf * w(bi.wo);
    const Mat hid_pre = affine(r, w(bi.f1w), w(bi.f1b));
    const Mat y = r + affine(relu(hid_pre), w(bi.f2w), w(bi.f2b));
    if (cache) {
      cb.u_in = u;
      cb.f_in = f;
      cb.cu = std::move(cu);
      cb.cf = std::move(cf);
      cb.r = std::move(r);
      cb.hid_pre = hid_pre;
      cache->blocks.push_back(std::move(cb));
    }
    u = y.topRows(n);
    f = y.bottomRows(n);
  }

  Mat a = u + f;
  if (cache) {
    cache->mlp_in.clear();
    cache->mlp_pre.clear();
  }
  const std::size_t layers = mlp_w_.size();
  for (std::size_t i = 0; i < layers; ++i) {
    if (cache) cache->mlp_in.push_back(a);
    Mat pre = affine(a, w(mlp_w_[i]), w(mlp_b_[i]));
    if (i + 1 == layers) return pre;
    if (cache) cache->mlp_pre.push_back(pre);
    a = relu(pre);
  }
  return a;  // unreachable: there is always an output layer
}

Mat VdbanModel::forward(const Mat& vdf, const Mat& loc) const { return run(vdf, loc, nullptr); }

double VdbanModel::loss_and_grad(const Mat& vdf, const Mat& loc, const std::vector<int>& labels,
                                 Mat* logits_out) {
  Cache cache;
  const Mat logits = run(vdf, loc, &cache);
  if (logits_out) *logits_out = logits;
  Mat dz;
  const double loss = softmax_cross_entropy(logits, labels, &dz);
  zero_grads(params_);
  const Eigen::Index n = vdf.rows();

  // Head MLP.
  Mat da = dz;
  for (std::size_t i = mlp_w_.size(); i-- > 0;) {
    if (i + 1 < mlp_w_.size()) da = relu_mask(cache.mlp_pre[i], da);
    g(mlp_w_[i]) = cache.mlp_in[i].transpose() * da;
    g(mlp_b_[i]) = da.colwise().sum();
    da = da * w(mlp_w_[i]).transpose();
  }
  Mat du = da;
  Mat df = da;

  // Encoder blocks, last first.
  for (std::size_t b = blocks_.size(); b-- > 0;) {
    const auto& bi = blocks_[b];
    const auto& cb = cache.blocks[b];
    Mat dy(2 * n, cfg_.model_dim);
    dy.topRows(n) = du;
    dy.bottomRows(n) = df;
    const Mat hid = relu(cb.hid_pre);
    g(bi.f2w) = hid.transpose() * dy;
    g(bi.f2b) = dy.colwise().sum();
    const Mat dhid = relu_mask(cb.hid_pre, dy * w(bi.f2w).transpose());
    g(bi.f1w) = cb.r.transpose() * dhid;
    g(bi.f1b) = dhid.colwise().sum();
    const Mat dr = dy + dhid * w(bi.f1w).transpose();
    const Mat dru = dr.topRows(n);
    const Mat drf = dr.bottomRows(n);

    g(bi.wo) = cb.cu.transpose() * dru + cb.cf.transpose() * drf;
    const Mat dcu = dru * w(bi.wo).transpose();
    const Mat dcf = drf * w(bi.wo).transpose();
    Mat du_in = dru;
    Mat df_in = drf;

    const Eigen::Index d = w(bi.heads[0].wq).cols();
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t hi = 0; hi < bi.heads.size(); ++hi) {
      const auto& hw = bi.heads[hi];
      const auto& ch = cb.heads[hi];
      const Mat dou = dcu.middleCols(static_cast<Eigen::Index>(hi) * d, d);
      const Mat dof = dcf.middleCols(static_cast<Eigen::Index>(hi) * d, d);

      const Vec dauu = row_dot(dou, ch.vu);
      const Vec dauf = row_dot(dou, ch.vf);
      const Vec dafu = row_dot(dof, ch.vu);
      const Vec daff = row_dot(dof, ch.vf);
      const Mat dvu = scale_rows(dou, ch.auu) + scale_rows(dof, ch.afu);
      const Mat dvf = scale_rows(dou, ch.auf) + scale_rows(dof, ch.aff);

      const Vec tu = ch.auu.cwiseProduct(dauu) + ch.auf.cwiseProduct(dauf);
      const Vec tf = ch.afu.cwiseProduct(dafu) + ch.aff.cwiseProduct(daff);
      const Vec dsuu = ch.auu.cwiseProduct(dauu - tu);
      const Vec dsuf = ch.auf.cwiseProduct(dauf - tu);
      const Vec dsfu = ch.afu.cwiseProduct(dafu - tf);
      const Vec dsff = ch.aff.cwiseProduct(daff - tf);

      const Mat dqu = c * (scale_rows(ch.ku, dsuu) + scale_rows(ch.kf, dsuf));
      const Mat dqf = c * (scale_rows(ch.ku, dsfu) + scale_rows(ch.kf, dsff));
      const Mat dku = c * (scale_rows(ch.qu, dsuu) + scale_rows(ch.qf, dsfu));
      const Mat dkf = c * (scale_rows(ch.qu, dsuf) + scale_rows(ch.qf, dsff));

      g(hw.wq) = cb.u_in.transpose() * dqu + cb.f_in.transpose() * dqf;
      g(hw.wk) = cb.u_in.transpose() * dku + cb.f_in.transpose() * dkf;
      g(hw.wv) = cb.u_in.transpose() * dvu + cb.f_in.transpose() * dvf;
      du_in += dqu * w(hw.wq).transpose() + dku * w(hw.wk).transpose() +
               dvu * w(hw.wv).transpose();
      df_in += dqf * w(hw.wq).transpose() + dkf * w(hw.wk).transpose() +
               dvf * w(hw.wv).transpose();
    }
    du = std::move(du_in);
    df = std::move(df_in);
  }

  // Location encoder.
  const Mat du_pre = relu_mask(cache.u_pre, du);
  g(loc_w_) = cache.loc.transpose() * du_pre;
  g(loc_b_) = du_pre.colwise().sum();

  // VDF encoder.
  const Mat df_pre = relu_mask(cache.f_pre, df);
  g(vdf_w_) = cache.conv.transpose() * df_pre;
  g(vdf_b_) = df_pre.colwise().sum();
  const Mat dconv = df_pre * w(vdf_w_).transpose();
  const int nf = cfg_.conv_filters;
  Mat dcw = Mat::Zero(nf, 4);
  Mat dcb = Mat::Zero(1, nf);
  for (int gi = 0; gi < cfg_.grid_cells; ++gi) {
    const Mat blk = dconv.middleCols(gi * nf, nf);
    dcw += blk.transpose() * cache.x.middleCols(4 * gi, 4);
    dcb += blk.colwise().sum();
  }
  g(conv_w_) = dcw;
  g(conv_b_) = dcb;
  return loss;
}

EncoderBlockWeights VdbanModel::block_weights(int block) const {
  const BlockIndex& bi = blocks_.at(block);
  EncoderBlockWeights out;
  for (const auto& h : bi.heads) out.heads.push_back({w(h.wq), w(h.wk), w(h.wv)});
  out.wo = w(bi.wo);
  out.ffn1_w = w(bi.f1w);
  out.ffn1_b = w(bi.f1b).row(0);
  out.ffn2_w = w(bi.f2w);
  out.ffn2_b = w(bi.f2b).row(0);
  return out;
}

Eigen::RowVectorXd VdbanModel::forward_single(const Mat& vdf_g4, const Eigen::Vector2d& loc) const {
  if (vdf_g4.rows() != cfg_.grid_cells || vdf_g4.cols() != 4) {
    throw std::invalid_argument("VdbanModel: VDF must be G x 4");
  }
  const int nf = cfg_.conv_filters;
  Eigen::RowVectorXd conv(cfg_.grid_cells * nf);
  for (int gi = 0; gi < cfg_.grid_cells; ++gi) {
    Eigen::RowVector4d row = vdf_g4.row(gi);
    row[3] *= cfg_.azimuth_scale;
    for (int k = 0; k < nf; ++k) {
      double s = w(conv_b_)(0, k);
      for (int ch = 0; ch < 4; ++ch) s += w(conv_w_)(k, ch) * row[ch];
      conv[gi * nf + k] = s;
    }
  }
  Eigen::RowVectorXd f = (conv * w(vdf_w_) + w(vdf_b_)).cwiseMax(0.0);
  Eigen::RowVectorXd u =
      ((loc.transpose() * cfg_.location_scale) * w(loc_w_) + w(loc_b_)).cwiseMax(0.0);
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) {
    std::tie(u, f) = multihead_forward(u, f, block_weights(b));
  }
  Eigen::RowVectorXd a = u + f;
  for (std::size_t i = 0; i < mlp_w_.size(); ++i) {
    a = a * w(mlp_w_[i]) + w(mlp_b_[i]);
    if (i + 1 < mlp_w_.size()) a = a.cwiseMax(0.0);
  }
  return a;
}

}  // namespace beamlab
