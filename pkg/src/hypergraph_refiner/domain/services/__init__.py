"""领域服务：采样、几何 oracle、匹配、解码与评测。"""
