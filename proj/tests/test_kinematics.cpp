#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "blue/kinematics.hpp"
#include "support.hpp"

using namespace blue;
using std::numbers::pi;

namespace {

double deg(double d) { return d * pi / 180.0; }

void expect_valid_pose(const Pose& p, double tol = 1e-10) {
  const Matrix3 r = p.rotation();
  EXPECT_LE((r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff(), tol);
  EXPECT_NEAR(r.determinant(), 1.0, tol);
  EXPECT_EQ(p.matrix.row(3), Eigen::RowVector4d(0, 0, 0, 1));
}

RobotModel default_model() { return load_model(std::string(BLUE_DATA_DIR) + "/blue_default.json"); }

}  // namespace

TEST(DH, ZeroRowIsIdentity) { EXPECT_EQ(dh_transform(DHRow{}, 0.0).matrix, Eigen::Matrix4d::Identity()); }

TEST(DH, QuarterTurnAboutZ) {
  Eigen::Matrix4d want = Eigen::Matrix4d::Identity();
  want.topLeftCorner<2, 2>() << 0, -1, 1, 0;
  EXPECT_LE((dh_transform(DHRow{}, pi / 2).matrix - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DH, FifteenDegreeExample) {
  const DHRow row{0.1, -pi / 2, 0.05, 0.0};
  const Pose p = dh_transform(row, deg(15));
  Eigen::Matrix4d frozen;
  frozen << 0.9659, -0.2588, 0, 0.1,  //
      0, 0, 1, 0.05,                  //
      -0.2588, -0.9659, 0, 0,         //
      0, 0, 0, 1;
  EXPECT_LE((p.matrix - frozen).cwiseAbs().maxCoeff(), 5e-5);
  EXPECT_LE((p.matrix - oracle::elementary_dh(row, deg(15))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DH, OffsetAddsToJointAngle) {
  const DHRow with{0.2, 0.3, -0.1, 0.4};
  const DHRow without{0.2, 0.3, -0.1, 0.0};
  EXPECT_LE((dh_transform(with, 0.1).matrix - dh_transform(without, 0.5).matrix).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DH, RandomRowsMatchElementaryFactors) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 500; ++n) {
    const DHRow row = oracle::random_dh(rng);
    const double th = oracle::uniform(rng, -pi, pi);
    const Pose p = dh_transform(row, th);
    ASSERT_LE((p.matrix - oracle::elementary_dh(row, th)).cwiseAbs().maxCoeff(), 1e-14);
    expect_valid_pose(p);
  }
}

TEST(Chain, ZeroConfigurationIsProductOfOffsets) {
  const RobotModel m = default_model();
  const ChainPoses poses = chain_transforms(m, Vector6::Zero());
  Pose t = base_transform(m);
  for (int i = 0; i < kNumJoints; ++i) {
    t = t * dh_transform(m.dh_table[i], 0.0);
    EXPECT_LE((poses[i].matrix - t.matrix).cwiseAbs().maxCoeff(), 1e-15) << i;
  }
}

TEST(Chain, DefaultModelStandsUpright) {
  // Frame origins at q = 0: stance leg vertical, left leg hanging.
  const ChainPoses p = chain_transforms(default_model(), Vector6::Zero());
  EXPECT_LE((p[1].translation() - Vector3(0, 0, 0.22)).norm(), 1e-12);
  EXPECT_LE((p[2].translation() - Vector3(0, 0, 0.42)).norm(), 1e-12);
  EXPECT_LE((p[5].translation() - Vector3(0.14, 0, 0.22)).norm(), 1e-12);
}

TEST(Chain, Recurrence) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 100; ++n) {
    const RobotModel m = oracle::random_model(rng);
    const Vector6 q = oracle::random_vec6(rng, -pi, pi);
    const ChainPoses p = chain_transforms(m, q);
    const Pose next = p[4] * dh_transform(m.dh_table[5], q(5));
    EXPECT_LE((p[5].matrix - next.matrix).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Chain, MatchesBruteForceProduct) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 1000; ++n) {
    const RobotModel m = oracle::random_model(rng);
    const Vector6 q = oracle::random_vec6(rng, -pi, pi);
    const ChainPoses p = chain_transforms(m, q);
    const auto brute = oracle::brute_force_chain(m, q);
    for (int i = 0; i < kNumJoints; ++i) {
      ASSERT_LE((p[i].matrix - brute[i]).cwiseAbs().maxCoeff(), 1e-12);
      expect_valid_pose(p[i]);
    }
  }
}

TEST(Chain, PerturbingJointLeavesUpstreamBitIdentical) {
  std::mt19937_64 rng(10);
  for (int n = 0; n < 100; ++n) {
    const RobotModel m = oracle::random_model(rng);
    const Vector6 q = oracle::random_vec6(rng, -pi, pi);
    const ChainPoses base = chain_transforms(m, q);
    for (int k = 0; k < kNumJoints; ++k) {
      Vector6 qk = q;
      qk(k) += 0.3;
      const ChainPoses moved = chain_transforms(m, qk);
      for (int i = 0; i < k; ++i) ASSERT_TRUE(moved[i] == base[i]) << "joint " << k << " frame " << i;
    }
  }
}

TEST(ComKinematics, AtRestAllVelocitiesZero) {
  std::mt19937_64 rng(12);
  const RobotModel m = oracle::random_model(rng);
  JointState s;
  s.q = oracle::random_vec6(rng, -pi, pi);
  const BodyKinematics k = com_kinematics(m, s);
  for (int i = 0; i < kNumJoints; ++i) {
    EXPECT_EQ(k.rd[i], Vector3::Zero());
    EXPECT_EQ(k.omega[i], Vector3::Zero());
  }
}

TEST(ComKinematics, FirstJointRateReachesEveryBody) {
  JointState s;
  s.qd(0) = 1.0;
  const BodyKinematics k = com_kinematics(default_model(), s);
  for (int i = 0; i < kNumJoints; ++i) EXPECT_EQ(k.omega[i], Vector3(1, 0, 0)) << kBodyNames[i];
}

TEST(ComKinematics, AngularVelocityComposition) {
  Vector6 qd;
  qd << 1, 2, 3, 4, 5, 6;
  JointState s;
  s.qd = qd;
  const BodyKinematics k = com_kinematics(default_model(), s);
  const std::array<Vector3, kNumJoints> want = {Vector3(1, 0, 0), Vector3(3, 0, 0), Vector3(3, 3, 0),
                                                Vector3(3, 7, 0), Vector3(8, 7, 0), Vector3(14, 7, 0)};
  for (int i = 0; i < kNumJoints; ++i) EXPECT_EQ(k.omega[i], want[i]) << kBodyNames[i];
}

TEST(ComKinematics, PositionIsFrameAppliedToOffset) {
  std::mt19937_64 rng(13);
  const RobotModel m = oracle::random_model(rng);
  JointState s;
  s.q = oracle::random_vec6(rng, -pi, pi);
  const auto brute = oracle::brute_force_chain(m, s.q);
  const BodyKinematics k = com_kinematics(m, s);
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Vector4d r = brute[i] * m.links[i].com_offset.homogeneous();
    EXPECT_LE((k.r[i] - r.head<3>()).norm(), 1e-12);
  }
}

TEST(ComKinematics, VelocityMatchesFiniteDifference) {
  std::mt19937_64 rng(14);
  const double h = 1e-6;
  for (int n = 0; n < 200; ++n) {
    const RobotModel m = oracle::random_model(rng);
    JointState s;
    s.q = oracle::random_vec6(rng, -pi, pi);
    s.qd = oracle::random_vec6(rng, -2, 2);
    const BodyKinematics k = com_kinematics(m, s);
    JointState plus = s, minus = s;
    plus.q += h * s.qd;
    minus.q -= h * s.qd;
    const BodyKinematics kp = com_kinematics(m, plus), km = com_kinematics(m, minus);
    for (int i = 0; i < kNumJoints; ++i) {
      const Vector3 fd = (kp.r[i] - km.r[i]) / (2 * h);
      ASSERT_LE((k.rd[i] - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(ComKinematics, LinearInJointRates) {
  std::mt19937_64 rng(15);
  for (int n = 0; n < 100; ++n) {
    const RobotModel m = oracle::random_model(rng);
    JointState s;
    s.q = oracle::random_vec6(rng, -pi, pi);
    s.qd = oracle::random_vec6(rng, -2, 2);
    const double a = oracle::uniform(rng, -3, 3);
    JointState scaled = s;
    scaled.qd *= a;
    const BodyKinematics k = com_kinematics(m, s), ks = com_kinematics(m, scaled);
    for (int i = 0; i < kNumJoints; ++i) {
      ASSERT_LE((ks.rd[i] - a * k.rd[i]).norm(), 1e-12 * (1 + k.rd[i].norm()));
      ASSERT_LE((ks.omega[i] - a * k.omega[i]).norm(), 1e-12 * (1 + k.omega[i].norm()));
    }
  }
}

TEST(Sweep, ZeroSpanGivesIdenticalRows) {
  const std::vector<int> joints{1};
  const SweepTable t = joint_sweep(default_model(), joints, 0.0, 0.0, 2);
  ASSERT_EQ(t.origins.size(), 2u);
  for (int i = 0; i <= kNumJoints; ++i) EXPECT_EQ(t.origins[0][i], t.origins[1][i]);
}

TEST(Sweep, SixteenRowsMonotoneAndRecomputed) {
  const RobotModel m = default_model();
  const std::vector<int> joints{0, 1, 4};
  const SweepTable t = joint_sweep(m, joints, 0.0, deg(15), 16);
  ASSERT_EQ(t.angles.size(), 16u);
  ASSERT_EQ(t.origins.size(), 16u);
  EXPECT_DOUBLE_EQ(t.angles.front(), 0.0);
  EXPECT_NEAR(t.angles.back(), deg(15), 1e-15);
  for (std::size_t k = 1; k < t.angles.size(); ++k) EXPECT_GT(t.angles[k], t.angles[k - 1]);
  for (std::size_t k = 0; k < t.angles.size(); ++k) {
    RobotModel mk = m;
    mk.stance_angle = t.angles[k];
    Vector6 q = Vector6::Zero();
    q(0) = q(3) = t.angles[k];
    const ChainPoses fresh = chain_transforms(mk, q);
    EXPECT_LE((t.origins[k][0] - base_transform(mk).translation()).norm(), 1e-15);
    for (int i = 0; i < kNumJoints; ++i) EXPECT_LE((t.origins[k][i + 1] - fresh[i].translation()).norm(), 1e-15);
  }
}

TEST(Sweep, RejectsBadArguments) {
  const RobotModel m = default_model();
  const std::vector<int> none;
  const std::vector<int> bad{7};
  const std::vector<int> ok{2};
  EXPECT_THROW(joint_sweep(m, none, 0, 1, 4), std::invalid_argument);
  EXPECT_THROW(joint_sweep(m, bad, 0, 1, 4), std::invalid_argument);
  EXPECT_THROW(joint_sweep(m, ok, 0, 1, 1), std::invalid_argument);
  RobotModel no_stance = m;
  no_stance.stance_row.reset();
  const std::vector<int> stance{0};
  EXPECT_THROW(joint_sweep(no_stance, stance, 0, 1, 4), std::invalid_argument);
}
