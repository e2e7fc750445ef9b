from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Any, Dict, List, Literal, Optional

CaseName = Literal['abelian', 'e-times-line', 'e-times-torus-quotient']
OutputFormat = Literal['json', 'csv', 'latex', 'text']
SeriesKind = Literal['hilbert', 'kummer', 'kummer-quotient', 'surface']
CheckKind = Literal['multiplicativity', 'strong-splitting', 'duality', 'diagonal', 'ring-axioms', 'frobenius']

# Run configuration schemas
class RunConfig(BaseModel):
    command: Literal['series', 'check', 'partitions']
    target: Optional[str] = None
    case: CaseName = "abelian"
    n: int = 1
    mode: Literal['exhaustive', 'sampled'] = "exhaustive"
    samples: Optional[int] = None
    seed: Optional[int] = None
    format: OutputFormat = "text"
    jobs: Optional[int] = None
    torsion_rank: Optional[int] = None
    torsion_factors: Optional[List[int]] = None
    output: Optional[str] = None

    @field_validator('n')
    @classmethod
    def validate_n(cls, v: int) -> int:
        if v < 1:
            raise ValueError("n 必须是正整数")
        return v

    @field_validator('samples')
    @classmethod
    def validate_samples(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("samples 必须是正整数")
        return v

    @field_validator('jobs', 'torsion_rank')
    @classmethod
    def validate_nonnegative(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 0:
            raise ValueError("不能为负数")
        return v

    @field_validator('torsion_factors')
    @classmethod
    def validate_torsion_factors(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        """不变因子须 ≥ 2 且依次整除"""
        if v is None:
            return v
        if any(d < 2 for d in v):
            raise ValueError("不变因子必须 ≥ 2")
        if any(b % a for a, b in zip(v, v[1:])):
            raise ValueError("不变因子必须依次整除")
        return v

    @model_validator(mode='after')
    def validate_target(self):
        """series / check 必须给出合法的子目标"""
        allowed = {
            'series': SeriesKind.__args__,
            'check': CheckKind.__args__,
            'partitions': (None,),
        }[self.command]
        if self.target not in allowed:
            raise ValueError(f"{self.command} 不支持目标 {self.target!r}")
        return self

# Polynomial schemas
class Term(BaseModel):
    d: int
    p: int
    c: int

class SeriesTable(BaseModel):
    kind: SeriesKind
    model: CaseName
    n: int
    terms: List[Term]
    betti: List[int]
    total_dimension: int
    lefschetz_symmetric: bool
    lefschetz_mismatches: List[List[int]] = []

class PartitionRow(BaseModel):
    partition: str
    length: int
    gcd: int
    torsion_count: int
    class_size: int
    kernel_dimension: int

class PartitionTable(BaseModel):
    model: CaseName
    n: int
    count: int
    rows: List[PartitionRow]

# Check report schemas
class Violation(BaseModel):
    alpha: str
    beta: str
    lambda_: str = Field(alias="lambda")
    sigma_tau: str
    p_alpha: int
    p_beta: int
    p_gamma: int

    class Config:
        populate_by_name = True

class CheckReport(BaseModel):
    check: CheckKind
    model: str
    n: int
    mode: Literal['exhaustive', 'sampled']
    pairs_checked: int = 0
    violation_count: int = 0
    violations: List[Violation] = []
    passed: bool = True
    seed: Optional[int] = None
    elapsed_ms: int = 0
    details: Dict[str, Any] = {}

    @model_validator(mode='after')
    def sync_passed(self):
        """有违例即不通过"""
        if self.violation_count < len(self.violations):
            self.violation_count = len(self.violations)
        self.passed = self.passed and self.violation_count == 0
        return self

# Frobenius validation schemas
class AxiomCheck(BaseModel):
    name: str
    passed: bool
    skipped: bool = False
    failures: int = 0
    witnesses: List[str] = []

class FrobeniusReport(BaseModel):
    algebra: str
    dimension: int
    passed: bool
    checks: List[AxiomCheck]

    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]
