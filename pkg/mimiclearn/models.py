"""Configuration models for mimiclearn."""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Task(str, Enum):
    """Binary prediction tasks carried as label channels."""

    MOR = "MOR"
    VFD = "VFD"


class FeatureView(str, Enum):
    """Column subsets of the flattened design matrix."""

    ALL = "all"
    TEMPORAL_ONLY = "temporal_only"
    STATIC_PLUS_DAY0 = "static_plus_day0"


class Activation(str, Enum):
    """Elementwise nonlinearities of a dense layer."""

    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"
    LINEAR = "linear"


class OptimizerKind(str, Enum):
    """Gradient-based optimizers."""

    SGD = "sgd"
    RMSPROP = "rmsprop"


class Objective(str, Enum):
    """Whether train_mlp fits the prediction objective."""

    PREDICT = "predict"
    NONE = "none"


class TeacherKind(str, Enum):
    """Deep teacher architectures."""

    DNN = "dnn"
    SDA = "sda"
    LSTM = "lstm"


class Pipeline(str, Enum):
    """Mimic pipelines: p1 goes through hidden features and LR, p2 uses soft scores."""

    P1 = "p1"
    P2 = "p2"


class StudentKind(str, Enum):
    """Interpretable students."""

    GBT = "gbt"
    DT = "dt"


class TreeKind(str, Enum):
    """CART split criteria."""

    CLASSIFIER_GINI = "classifier_gini"
    REGRESSOR_MSE = "regressor_mse"


class LinearKind(str, Enum):
    """Linear model families."""

    LOGREG = "logreg"
    LINSVM = "linsvm"


class _Config(BaseModel):
    """Base for strict configuration models."""

    model_config = ConfigDict(extra="forbid")


class CsvSchema(_Config):
    """Column-naming convention of dataset CSV files."""

    id_column: str = "patient_id"
    label_columns: dict = Field(
        default_factory=lambda: {Task.MOR.value: "label_mor", Task.VFD.value: "label_vfd"}
    )
    static_prefix: str = "s_"
    temporal_prefix: str = "t_"
    day_marker: str = "_d"

    def static_column(self, name: str) -> str:
        return f"{self.static_prefix}{name}"

    def temporal_column(self, name: str, day: int) -> str:
        return f"{self.temporal_prefix}{name}{self.day_marker}{day}"


class SynthConfig(_Config):
    """Settings of the synthetic VENT-like generator.

    Defaults mirror the shape of the real cohort: 27 static variables,
    21 temporal variables over 4 days and a 13.43% missing rate.
    """

    n_samples: int = Field(default=400, ge=2)
    q_static: int = Field(default=27, ge=0)
    p_temporal: int = Field(default=21, ge=1)
    t_steps: int = Field(default=4, ge=1)
    missing_rate: float = Field(default=0.1343, ge=0.0, lt=1.0)
    n_informative_temporal: int = Field(default=3, ge=0)
    n_informative_static: int = Field(default=2, ge=0)
    n_zero_day0: int = Field(default=2, ge=0)
    label_noise: float = Field(default=0.05, ge=0.0, lt=0.5)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_counts(self) -> "SynthConfig":
        if self.n_informative_temporal > self.p_temporal:
            raise ValueError("n_informative_temporal must not exceed p_temporal")
        if self.n_informative_static > self.q_static:
            raise ValueError("n_informative_static must not exceed q_static")
        if self.n_informative_temporal + self.n_zero_day0 > self.p_temporal:
            raise ValueError(
                "n_zero_day0 must leave the informative temporal variables untouched"
            )
        return self


class TrainConfig(_Config):
    """Training hyperparameters of the neural teachers.

    Defaults: 50 epochs, learning rate 0.001, hidden layers twice the input
    width. ``optimizer=None`` picks SGD for feedforward teachers and RMSprop
    for the LSTM.
    """

    epochs: int = Field(default=50, ge=1)
    learning_rate: float = Field(default=0.001, gt=0.0)
    optimizer: Optional[OptimizerKind] = None
    batch_size: int = Field(default=32, ge=1)
    hidden_multiplier: int = Field(default=2, ge=1)
    hidden_sizes: Optional[List[int]] = None
    lstm_hidden_size: Optional[int] = Field(default=None, ge=1)
    activation: Activation = Activation.SIGMOID
    noise_rate: float = Field(default=0.2, ge=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0)

    @field_validator("hidden_sizes")
    @classmethod
    def _check_hidden_sizes(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None:
            if not value:
                raise ValueError("hidden_sizes must name at least one layer")
            if any(size < 1 for size in value):
                raise ValueError("hidden_sizes entries must be positive")
        return value

    def resolved_optimizer(self, default: OptimizerKind) -> OptimizerKind:
        return self.optimizer if self.optimizer is not None else default


class TreeConfig(_Config):
    """CART / boosting settings.

    Boosting defaults: 100 stages, shrinkage 0.1, depth 3 (at most 8
    leaves). Single trees are grown with ``max_depth=None``.
    """

    max_depth: Optional[int] = Field(default=3, ge=1)
    n_stages: int = Field(default=100, ge=1)
    shrinkage: float = Field(default=0.1, gt=0.0, le=1.0)
    min_samples_split: int = Field(default=2, ge=2)
    random_tie_break: bool = False
    seed: int = Field(default=0, ge=0)


class LinearConfig(_Config):
    """Linear model settings; ``l2=None`` selects the per-kind default."""

    l2: Optional[float] = Field(default=None, ge=0.0)
    max_iter: int = Field(default=5000, ge=1)
    tol: float = Field(default=1e-6, gt=0.0)
    svm_step: float = Field(default=0.5, gt=0.0)

    def resolved_l2(self, kind: LinearKind) -> float:
        if self.l2 is not None:
            return self.l2
        return 1e-4 if kind == LinearKind.LOGREG else 1e-2


class TeacherSpec(_Config):
    """A deep teacher plus whether an LR head sits on its hidden features."""

    kind: TeacherKind
    with_lr_head: bool = False
    train_config: TrainConfig = Field(default_factory=TrainConfig)

    @property
    def name(self) -> str:
        """Method name of the teacher, e.g. ``LR-SDA``."""
        base = self.kind.value.upper()
        return f"LR-{base}" if self.with_lr_head else base


class BenchConfig(_Config):
    """Benchmark matrix (methods x views x tasks) and the protocol settings.

    ``methods`` takes method ids such as ``LR``, ``LR-SDA`` or
    ``GBTmimic-LSTM``; every id is crossed with every view and task.
    """

    methods: List[str] = Field(default_factory=lambda: ["LR", "GBT", "DNN", "GBTmimic-DNN"])
    views: List[FeatureView] = Field(default_factory=lambda: [FeatureView.ALL])
    tasks: List[Task] = Field(default_factory=lambda: [Task.MOR])
    trials: int = Field(default=5, ge=1)
    folds: int = Field(default=5, ge=2)
    seed: int = Field(default=0, ge=0)
    max_workers: int = Field(default=1, ge=1)
    top_k: int = Field(default=0, ge=0)
    train: TrainConfig = Field(default_factory=TrainConfig)
    tree: TreeConfig = Field(default_factory=TreeConfig)
    linear: LinearConfig = Field(default_factory=LinearConfig)

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("methods must name at least one method")
        return value


class TrainRunConfig(_Config):
    """Settings of ``mimiclearn train``: one method fitted on the whole dataset."""

    method: str = "DNN"
    task: Task = Task.MOR
    view: FeatureView = FeatureView.ALL
    seed: int = Field(default=0, ge=0)
    train: TrainConfig = Field(default_factory=TrainConfig)
    tree: TreeConfig = Field(default_factory=TreeConfig)
    linear: LinearConfig = Field(default_factory=LinearConfig)


class DistillRunConfig(_Config):
    """Settings of ``mimiclearn distill``.

    Pipeline p1 puts an LR head on the teacher's hidden features, so the
    teacher spec is ``LR-<kind>``; p2 distills the teacher's own scores.
    """

    teacher: TeacherKind = TeacherKind.DNN
    pipeline: Pipeline = Pipeline.P2
    student: StudentKind = StudentKind.GBT
    task: Task = Task.MOR
    view: FeatureView = FeatureView.ALL
    seed: int = Field(default=0, ge=0)
    train: TrainConfig = Field(default_factory=TrainConfig)
    tree: TreeConfig = Field(default_factory=TreeConfig)
    linear: LinearConfig = Field(default_factory=LinearConfig)

    def teacher_spec(self) -> TeacherSpec:
        return TeacherSpec(
            kind=self.teacher,
            with_lr_head=self.pipeline == Pipeline.P1,
            train_config=self.train,
        )

    @property
    def method_id(self) -> str:
        prefix = "GBTmimic" if self.student == StudentKind.GBT else "DTmimic"
        return f"{prefix}-{self.teacher_spec().name}"
