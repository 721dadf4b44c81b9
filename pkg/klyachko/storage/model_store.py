# klyachko/storage/model_store.py
"""
Model file loading
Reads a JSON model file, validates it against the wire schema and then
semantically (fan, completeness, filtrations, compatibility), and keeps the
loaded models in memory keyed by the sha256 of the file bytes.
"""
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from ..errors import (
    Diagnostic,
    FiltrationError,
    IncompatibleBundleError,
    ModelInvalidError,
    UnsupportedRankError,
)
from ..models.bundle import ConeGrading, Filtration, ToricBundle
from ..models.fan import Fan
from ..models.schemas import KlyachkoBundleSpec, ModelFile, SplitBundleSpec
from ..services.bundle_service import bundle_service
from ..services.compatibility_service import compatibility_service
from ..services.fan_service import fan_service
from ..services.linalg import Subspace

logger = logging.getLogger(__name__)

BUNDLE_TAGS = ("split", "klyachko")
RAY_VIOLATIONS = {"wrong length", "non-primitive", "unused ray"}
CONE_VIOLATIONS = {"empty cone", "repeated index", "bad ray index", "dependent rays", "bad intersection"}


@dataclass(frozen=True)
class LoadedModel:
    """A validated model file with everything derived while checking it"""
    digest: str
    spec: ModelFile
    fan: Fan
    bundle: ToricBundle
    gradings: Dict[int, ConeGrading]
    complete: Optional[bool]
    warnings: Tuple[str, ...] = ()


def _pointer(loc) -> str:
    parts = list(loc)
    # discriminated unions put the tag into the location
    if len(parts) > 1 and parts[0] == "bundle" and parts[1] in BUNDLE_TAGS:
        del parts[1]
    return "/" + "/".join(str(p) for p in parts)


class ModelStore:
    """
    Loads model files
    Parsed models are memoised by content digest; files are never written
    """

    def __init__(self):
        self.local_storage: Dict[str, LoadedModel] = {}

    def load(self, path) -> LoadedModel:
        """
        Read and validate a model file.

        Raises:
            ModelInvalidError: with every diagnostic found
        """
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ModelInvalidError([Diagnostic("", f"cannot read {path}: {exc.strerror or exc}")])
        digest = hashlib.sha256(raw).hexdigest()
        cached = self.local_storage.get(digest)
        if cached is not None:
            logger.debug("model %s served from memory", digest[:12])
            return cached
        try:
            model = self.parse(raw, digest)
        except ModelInvalidError as exc:
            exc.context["digest"] = digest
            raise
        self.local_storage[digest] = model
        logger.info("📂 loaded %s (%d rays, rank %d bundle)", path, model.fan.n_rays, model.bundle.rank)
        return model

    def parse(self, raw: bytes, digest: str) -> LoadedModel:
        try:
            document = json.loads(raw.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise ModelInvalidError([Diagnostic("", f"file is not UTF-8: {exc.reason}")])
        except json.JSONDecodeError as exc:
            raise ModelInvalidError([Diagnostic("", exc.msg, exc.lineno, exc.colno)])
        try:
            spec = ModelFile.model_validate(document)
        except ValidationError as exc:
            raise ModelInvalidError([Diagnostic(_pointer(e["loc"]), e["msg"]) for e in exc.errors()])

        warnings: List[str] = []
        fan = Fan.from_lists(spec.lattice_rank, spec.rays, spec.max_cones)
        diagnostics = self._fan_diagnostics(fan)
        if diagnostics:
            raise ModelInvalidError(diagnostics)

        complete: Optional[bool]
        try:
            complete = fan_service.is_complete(fan)
        except UnsupportedRankError:
            complete = None
            warnings.append(f"completeness not checked for lattice rank {fan.lattice_rank} > 3")
        if complete is False:
            raise ModelInvalidError([Diagnostic("/max_cones", "the fan is not complete")])
        if complete is None and not fan_service.positively_spans(fan):
            raise ModelInvalidError([Diagnostic("/rays", "the rays do not positively span N_Q")])

        bundle = self._bundle(spec, fan)
        try:
            gradings = compatibility_service.gradings(bundle)
        except IncompatibleBundleError as exc:
            raise ModelInvalidError([
                Diagnostic(
                    f"/max_cones/{witness.cone_index}",
                    f"bundle data is incompatible on maximal cone {witness.cone_index} "
                    f"(rays {list(fan.cone(witness.cone_index).ray_indices)}): {witness.kind}",
                    detail=witness.to_dict(),
                )
                for witness in exc.witnesses
            ])

        if spec.assertions.projective:
            warnings.append("projectivity asserted by the model file, not checked; completeness was checked")
        else:
            warnings.append("projectivity not asserted; only completeness was checked")
        return LoadedModel(digest, spec, fan, bundle, gradings, complete, tuple(warnings))

    def _fan_diagnostics(self, fan: Fan) -> List[Diagnostic]:
        diagnostics = []
        for violation in fan_service.validate_fan(fan):
            if violation.kind in RAY_VIOLATIONS:
                path = f"/rays/{violation.indices[0]}"
            elif violation.kind == "duplicate ray":
                path = f"/rays/{violation.indices[-1]}"
            elif violation.kind in CONE_VIOLATIONS and violation.indices:
                path = f"/max_cones/{violation.indices[0]}"
            elif violation.kind == "bad rank":
                path = "/lattice_rank"
            else:
                path = "/max_cones"
            diagnostics.append(Diagnostic(path, f"{violation.kind}: {violation.message}"))
        return diagnostics

    def _bundle(self, spec: ModelFile, fan: Fan) -> ToricBundle:
        data = spec.bundle
        if isinstance(data, SplitBundleSpec):
            bad = [
                Diagnostic(f"/bundle/coefficients/{i}", f"expected {fan.n_rays} coefficients, got {len(row)}")
                for i, row in enumerate(data.coefficients) if len(row) != fan.n_rays
            ]
            if bad:
                raise ModelInvalidError(bad)
            return bundle_service.from_divisors(fan, data.coefficients)
        return self._klyachko_bundle(data, fan)

    def _klyachko_bundle(self, data: KlyachkoBundleSpec, fan: Fan) -> ToricBundle:
        if len(data.filtrations) != fan.n_rays:
            raise ModelInvalidError([Diagnostic(
                "/bundle/filtrations",
                f"expected {fan.n_rays} filtrations (one per ray), got {len(data.filtrations)}",
            )])
        r = data.rank
        diagnostics = []
        filtrations = []
        for ray, steps in enumerate(data.filtrations):
            built = []
            for k, step in enumerate(steps):
                bad = [i for i, row in enumerate(step.basis) if len(row) != r]
                if bad:
                    diagnostics.append(Diagnostic(
                        f"/bundle/filtrations/{ray}/{k}/basis/{bad[0]}",
                        f"basis row has length {len(step.basis[bad[0]])}, expected {r}",
                    ))
                    continue
                built.append((step.jump, Subspace.span(step.basis, r)))
            if len(built) != len(steps):
                continue
            try:
                filtrations.append(Filtration(r, tuple(built)))
            except FiltrationError as exc:
                path = f"/bundle/filtrations/{ray}"
                if "step" in exc.context:
                    path += f"/{exc.context['step']}"
                diagnostics.append(Diagnostic(path, exc.message))
        if diagnostics:
            raise ModelInvalidError(diagnostics)
        return ToricBundle(fan, r, tuple(filtrations))


# Create a single instance to use across the toolkit
model_store = ModelStore()


def parse_model(path) -> LoadedModel:
    """Load and fully validate a model file (see ModelStore.load)"""
    return model_store.load(path)
